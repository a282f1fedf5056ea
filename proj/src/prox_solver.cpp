#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "problem.hpp"
#include "vgr/errors.hpp"
#include "vgr/prox_solver.hpp"

namespace vgr {

double prox_nonneg_l1(double value, double lambda) { return std::max(value - lambda, 0.0); }

std::vector<double> prox_group(std::span<const double> v, double kappa)
{
    double sq = 0.0;
    for (double e : v)
        sq += e * e;
    const double norm = std::sqrt(sq);
    std::vector<double> out(v.size(), 0.0);
    if (norm <= kappa || norm == 0.0)
        return out;
    const double shrink = 1.0 - kappa / norm;
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = shrink * v[i];
    return out;
}

namespace {

using detail::Problem;

// Three-block consensus ADMM in scaled form.
//
//   W   base copy of [H1, H2]; carries the least-squares term
//   Z   copy carrying L1 + nonnegativity + masks + symmetry (closed-form prox)
//   Zg  one copy of each triplet group's coordinates; carries gamma * ||.||_2
//
// Constraints W = Z and S_g W = Zg. The W step decouples by node row into
// (2 G_ff + rho diag(1 + c_f)) w_f = rhs, G = M M^T, c = group cover count.
class ConsensusAdmm {
public:
    ConsensusAdmm(const Problem& problem, const WarmStart* warm)
        : p_(problem),
          n_(problem.n()),
          cfg_(problem.config()),
          gram_(problem.regressors() * problem.regressors().transpose()),
          cross_(problem.regressors() * problem.target().transpose()),
          cover_(Matrix::Zero(problem.n(), problem.dim())),
          w_(Matrix::Zero(problem.n(), problem.dim())),
          z_(w_),
          u_(w_),
          zg_(problem.groups().rows.size(), 0.0),
          ug_(zg_.size(), 0.0),
          rho_(cfg_.rho)
    {
        const auto& gl = p_.groups();
        for (std::size_t q = 0; q < gl.rows.size(); ++q)
            cover_(gl.rows[q], gl.cols[q]) += 1.0;
        for (std::size_t g = 0; g < gl.count(); ++g) {
            std::vector<std::size_t> h2;
            for (std::size_t q = gl.offsets[g]; q < gl.offsets[g + 1]; ++q)
                if (gl.cols[q] >= n_)
                    h2.push_back(q);
            if (h2.size() == 6)
                tuple_sets_.push_back({h2[0], h2[1], h2[2], h2[3], h2[4], h2[5]});
        }
        for (const auto& cols : p_.free_columns())
            free_count_ += static_cast<Index>(cols.size());

        if (warm) {
            w_ = p_.combine(warm->h1, warm->h2);
            z_ = w_;
            for (std::size_t q = 0; q < zg_.size(); ++q)
                zg_[q] = w_(gl.rows[q], gl.cols[q]);
            rho_ = warm->rho;
        }
        factorize();
    }

    SolveReport run()
    {
        SolveReport rep;
        const auto& gl = p_.groups();
        const double sqrt_p = std::sqrt(static_cast<double>(free_count_ + static_cast<Index>(zg_.size())));
        const double sqrt_n = std::sqrt(static_cast<double>(free_count_));

        double best = std::numeric_limits<double>::infinity();
        Matrix best_z = z_;
        Matrix scatter(n_, p_.dim());
        std::vector<double> wsel(zg_.size());

        for (int it = 1; it <= cfg_.max_iter; ++it) {
            update_base();

            const Matrix z_old = z_;
            const std::vector<double> zg_old = zg_;
            z_ = project_copy(w_ + u_);
            for (std::size_t q = 0; q < zg_.size(); ++q)
                wsel[q] = w_(gl.rows[q], gl.cols[q]);
            update_groups(wsel);

            u_ += w_ - z_;
            double r_sq = (w_ - z_).squaredNorm();
            double wsel_sq = 0.0, zg_sq = 0.0;
            for (std::size_t q = 0; q < zg_.size(); ++q) {
                const double d = wsel[q] - zg_[q];
                ug_[q] += d;
                r_sq += d * d;
                wsel_sq += wsel[q] * wsel[q];
                zg_sq += zg_[q] * zg_[q];
            }

            scatter = z_ - z_old;
            for (std::size_t q = 0; q < zg_.size(); ++q)
                scatter(gl.rows[q], gl.cols[q]) += zg_[q] - zg_old[q];
            const double s = rho_ * scatter.norm();
            const double r = std::sqrt(r_sq);

            scatter = u_;
            for (std::size_t q = 0; q < ug_.size(); ++q)
                scatter(gl.rows[q], gl.cols[q]) += ug_[q];
            const double eps_pri = sqrt_p * cfg_.tol_abs +
                                   cfg_.tol_rel * std::max(std::sqrt(w_.squaredNorm() + wsel_sq),
                                                           std::sqrt(z_.squaredNorm() + zg_sq));
            const double eps_dual = sqrt_n * cfg_.tol_abs + cfg_.tol_rel * rho_ * scatter.norm();

            const double obj = p_.objective(z_);
            rep.objective_trace.push_back(obj);
            if (obj < best) {
                best = obj;
                best_z = z_;
            }
            rep.iterations = it;
            rep.primal_residual = r;
            rep.dual_residual = s;
            rep.primal_threshold = eps_pri;
            rep.dual_threshold = eps_dual;
            if (r <= eps_pri && s <= eps_dual) {
                rep.converged = true;
                break;
            }
            if (cfg_.adapt_rho && it % kAdaptEvery == 0 && it <= kAdaptUntil)
                rebalance(r, s);
        }

        Matrix out = rep.converged ? z_ : best_z;
        if (rep.converged) {
            // A group whose copy shrank to exactly zero zeroes all of its
            // coordinates at the optimum; carry that support into the output.
            for (std::size_t g = 0; g < gl.count(); ++g) {
                const auto b = zg_.begin() + static_cast<std::ptrdiff_t>(gl.offsets[g]);
                const auto e = zg_.begin() + static_cast<std::ptrdiff_t>(gl.offsets[g + 1]);
                if (b != e && std::all_of(b, e, [](double v) { return v == 0.0; }))
                    for (std::size_t q = gl.offsets[g]; q < gl.offsets[g + 1]; ++q)
                        out(gl.rows[q], gl.cols[q]) = 0.0;
            }
        }
        rep.h1 = p_.h1_of(out);
        rep.h2 = p_.h2_of(out);
        rep.objective = rep.converged ? p_.objective(out) : best;
        rep.final_rho = rho_;
        return rep;
    }

private:
    static constexpr int kAdaptEvery = 10;
    static constexpr int kAdaptUntil = 2000;
    static constexpr double kImbalance = 10.0;

    void factorize()
    {
        factors_.clear();
        factors_.reserve(static_cast<std::size_t>(n_));
        for (Index k = 0; k < n_; ++k) {
            const auto& f = p_.free_columns()[static_cast<std::size_t>(k)];
            Matrix a = 2.0 * gram_(f, f);
            for (std::size_t t = 0; t < f.size(); ++t)
                a(static_cast<Index>(t), static_cast<Index>(t)) += rho_ * (1.0 + cover_(k, f[t]));
            factors_.emplace_back(a);
        }
    }

    void update_base()
    {
        const auto& gl = p_.groups();
        Matrix pull = rho_ * (z_ - u_);
        for (std::size_t q = 0; q < zg_.size(); ++q)
            pull(gl.rows[q], gl.cols[q]) += rho_ * (zg_[q] - ug_[q]);
        w_.setZero();
        for (Index k = 0; k < n_; ++k) {
            const auto& f = p_.free_columns()[static_cast<std::size_t>(k)];
            if (f.empty())
                continue;
            Vector rhs = 2.0 * cross_(f, k) + pull(k, f).transpose();
            w_(k, f) = factors_[static_cast<std::size_t>(k)].solve(rhs).transpose();
        }
    }

    // Prox of alpha|H1|_1 + beta|H2|_1 + constraint indicators, step 1/rho.
    // Symmetrization commutes with the separable shifted clamp, so averaging
    // first and clamping second is the exact prox.
    Matrix project_copy(Matrix v) const
    {
        const auto& free = p_.free();
        if (cfg_.symmetric_h1) {
            const Matrix h1 = v.leftCols(n_);
            v.leftCols(n_) = 0.5 * (h1 + h1.transpose());
        }
        if (cfg_.symmetric_h2) {
            const auto& gl = p_.groups();
            for (const auto& set : tuple_sets_) {
                double mean = 0.0;
                for (std::size_t q : set)
                    mean += v(gl.rows[q], gl.cols[q]);
                mean /= 6.0;
                for (std::size_t q : set)
                    v(gl.rows[q], gl.cols[q]) = mean;
            }
        }
        const double t1 = cfg_.alpha / rho_;
        const double t2 = cfg_.beta / rho_;
        for (Index c = 0; c < v.cols(); ++c) {
            const double t = c < n_ ? t1 : t2;
            for (Index k = 0; k < n_; ++k)
                v(k, c) = free(k, c) ? prox_nonneg_l1(v(k, c), t) : 0.0;
        }
        return v;
    }

    void update_groups(const std::vector<double>& wsel)
    {
        const auto& gl = p_.groups();
        const double kappa = cfg_.gamma / rho_;
        std::vector<double> buf;
        for (std::size_t g = 0; g < gl.count(); ++g) {
            const std::size_t b = gl.offsets[g], e = gl.offsets[g + 1];
            buf.resize(e - b);
            for (std::size_t q = b; q < e; ++q)
                buf[q - b] = wsel[q] + ug_[q];
            const auto shrunk = prox_group(buf, kappa);
            std::copy(shrunk.begin(), shrunk.end(), zg_.begin() + static_cast<std::ptrdiff_t>(b));
        }
    }

    void rebalance(double r, double s)
    {
        double factor = 1.0;
        if (r > kImbalance * s)
            factor = 2.0;
        else if (s > kImbalance * r)
            factor = 0.5;
        if (factor == 1.0)
            return;
        rho_ *= factor;
        u_ /= factor;
        for (double& v : ug_)
            v /= factor;
        factorize();
    }

    const Problem& p_;
    Index n_;
    const SolveConfig& cfg_;
    Matrix gram_;
    Matrix cross_;
    Matrix cover_;
    Matrix w_, z_, u_;
    std::vector<double> zg_, ug_;
    double rho_;
    Index free_count_ = 0;
    std::vector<std::array<std::size_t, 6>> tuple_sets_;
    std::vector<Eigen::LLT<Matrix>> factors_;
};

} // namespace

SolveReport solve(const SignalMatrix& x, const SolveConfig& cfg, const WarmStart* warm)
{
    const Problem problem(x, cfg);
    if (warm && !(warm->rho > 0.0))
        throw ArgumentError("warm start rho must be positive");
    ConsensusAdmm admm(problem, warm);
    return admm.run();
}

} // namespace vgr
