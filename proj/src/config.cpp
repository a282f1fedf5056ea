#include "vgr/config.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "vgr/csv_io.hpp"
#include "vgr/errors.hpp"

namespace vgr {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

bool parse_bool(const std::string& v, const std::string& key)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw InputError(key + ": expected true/false, got \"" + v + "\"");
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

template <typename T>
std::string join(const std::vector<T>& values, const std::function<std::string(const T&)>& fmt)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += fmt(values[i]);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& v, const std::string& key)
{
    std::vector<double> out;
    for (const auto& item : split_list(v))
        out.push_back(io::parse_double(item, key));
    return out;
}

std::string fmt_doubles(const std::vector<double>& v)
{
    return join<double>(v, [](const double& d) { return io::format_double(d); });
}

// Key -> (setter, getter) table over ExperimentConfig.
struct Field {
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define VGR_DOUBLE(path)                                                                                               \
    Field                                                                                                              \
    {                                                                                                                  \
        [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.path = io::parse_double(v, k); },      \
            [](const ExperimentConfig& c) { return io::format_double(c.path); }                                        \
    }
#define VGR_BOOL(path)                                                                                                 \
    Field                                                                                                              \
    {                                                                                                                  \
        [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.path = parse_bool(v, k); },            \
            [](const ExperimentConfig& c) { return format_bool(c.path); }                                              \
    }
#define VGR_INT(path, type)                                                                                            \
    Field                                                                                                              \
    {                                                                                                                  \
        [](ExperimentConfig& c, const std::string& v, const std::string& k) {                                          \
            c.path = static_cast<type>(io::parse_int(v, k));                                                           \
        },                                                                                                             \
            [](const ExperimentConfig& c) { return std::to_string(c.path); }                                           \
    }
#define VGR_DOUBLES(path)                                                                                              \
    Field                                                                                                              \
    {                                                                                                                  \
        [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.path = parse_doubles(v, k); },         \
            [](const ExperimentConfig& c) { return fmt_doubles(c.path); }                                              \
    }

const std::map<std::string, Field>& fields()
{
    static const std::map<std::string, Field> table = {
        {"generator.n", VGR_INT(generator.n, Index)},
        {"generator.r", VGR_INT(generator.r, Index)},
        {"generator.edge_prob", VGR_DOUBLE(generator.edge_prob)},
        {"generator.tri_fill_prob", VGR_DOUBLE(generator.tri_fill_prob)},
        {"generator.h1_weight_lo", VGR_DOUBLE(generator.h1_weight_range[0])},
        {"generator.h1_weight_hi", VGR_DOUBLE(generator.h1_weight_range[1])},
        {"generator.h2_weight_lo", VGR_DOUBLE(generator.h2_weight_range[0])},
        {"generator.h2_weight_hi", VGR_DOUBLE(generator.h2_weight_range[1])},
        {"generator.noise_std", VGR_DOUBLE(generator.noise_std)},
        {"generator.seed",
         Field{[](ExperimentConfig& c, const std::string& v, const std::string& k) {
                   const long long s = io::parse_int(v, k);
                   if (s < 0)
                       throw InputError(k + ": seed must be nonnegative");
                   c.generator.seed = static_cast<std::uint64_t>(s);
               },
               [](const ExperimentConfig& c) { return std::to_string(c.generator.seed); }}},
        {"generator.signal_lo", VGR_DOUBLE(generator.signal_range[0])},
        {"generator.signal_hi", VGR_DOUBLE(generator.signal_range[1])},
        {"generator.target_ratio", VGR_DOUBLE(generator.target_ratio)},
        {"solver.alpha", VGR_DOUBLE(solver.alpha)},
        {"solver.beta", VGR_DOUBLE(solver.beta)},
        {"solver.gamma", VGR_DOUBLE(solver.gamma)},
        {"solver.rho", VGR_DOUBLE(solver.rho)},
        {"solver.max_iter", VGR_INT(solver.max_iter, int)},
        {"solver.tol_abs", VGR_DOUBLE(solver.tol_abs)},
        {"solver.tol_rel", VGR_DOUBLE(solver.tol_rel)},
        {"solver.symmetric_h1", VGR_BOOL(solver.symmetric_h1)},
        {"solver.symmetric_h2", VGR_BOOL(solver.symmetric_h2)},
        {"solver.adapt_rho", VGR_BOOL(solver.adapt_rho)},
        {"rc.threshold", VGR_DOUBLE(rc.threshold)},
        {"rc.weight_rule",
         Field{[](ExperimentConfig& c, const std::string& v, const std::string& k) {
                   if (v == "min")
                       c.rc.weight_rule = TriangleWeightRule::Min;
                   else if (v == "product")
                       c.rc.weight_rule = TriangleWeightRule::Product;
                   else
                       throw InputError(k + ": expected min or product");
               },
               [](const ExperimentConfig& c) {
                   return std::string(c.rc.weight_rule == TriangleWeightRule::Min ? "min" : "product");
               }}},
        {"experiment.r_grid",
         Field{[](ExperimentConfig& c, const std::string& v, const std::string& k) {
                   c.r_grid.clear();
                   for (const auto& item : split_list(v))
                       c.r_grid.push_back(static_cast<Index>(io::parse_int(item, k)));
               },
               [](const ExperimentConfig& c) {
                   return join<Index>(c.r_grid, [](const Index& r) { return std::to_string(r); });
               }}},
        {"experiment.seeds",
         Field{[](ExperimentConfig& c, const std::string& v, const std::string& k) {
                   c.seeds.clear();
                   for (const auto& item : split_list(v)) {
                       const long long s = io::parse_int(item, k);
                       if (s < 0)
                           throw InputError(k + ": seeds must be nonnegative");
                       c.seeds.push_back(static_cast<std::uint64_t>(s));
                   }
               },
               [](const ExperimentConfig& c) {
                   return join<std::uint64_t>(c.seeds, [](const std::uint64_t& s) { return std::to_string(s); });
               }}},
        {"experiment.alpha_grid", VGR_DOUBLES(alpha_grid)},
        {"experiment.beta_grid", VGR_DOUBLES(beta_grid)},
        {"experiment.gamma_grid", VGR_DOUBLES(gamma_grid)},
        {"experiment.eps_grid", VGR_DOUBLES(eps_grid)},
        {"experiment.v_known", VGR_BOOL(v_known)},
        {"experiment.edge_threshold", VGR_DOUBLE(thresholds.edge)},
        {"experiment.tri_threshold", VGR_DOUBLE(thresholds.triangle)},
        {"experiment.output_dir",
         Field{[](ExperimentConfig& c, const std::string& v, const std::string&) { c.output_dir = v; },
               [](const ExperimentConfig& c) { return c.output_dir.string(); }}},
        {"experiment.oracle_iterations", VGR_INT(oracle_iterations, int)},
        {"experiment.threads", VGR_INT(threads, int)},
    };
    return table;
}

#undef VGR_DOUBLE
#undef VGR_BOOL
#undef VGR_INT
#undef VGR_DOUBLES

} // namespace

void ExperimentConfig::validate() const
{
    generator.validate();
    solver.validate();
    rc.validate();
    auto fail = [](const std::string& m) { throw ArgumentError("experiment config: " + m); };
    if (r_grid.empty() || seeds.empty())
        fail("r_grid and seeds must be nonempty");
    for (Index r : r_grid)
        if (r < 2)
            fail("every r in r_grid must be at least 2");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        fail("seeds must be distinct");
    for (const auto* grid : {&alpha_grid, &beta_grid, &gamma_grid})
        for (double v : *grid)
            if (!(v >= 0.0))
                fail("hyperparameter grids must be nonnegative");
    for (double e : eps_grid)
        if (!(e >= 0.0 && e <= 1.0))
            fail("eps_grid values must lie in [0, 1]");
    if (!(thresholds.edge >= 0.0) || !(thresholds.triangle >= 0.0))
        fail("thresholds must be nonnegative");
    if (oracle_iterations < 1 || threads < 1)
        fail("oracle_iterations and threads must be positive");
}

KeyValues read_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open config " + path.string());
    KeyValues kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        try {
            auto [key, value] = parse_assignment(line);
            kv.insert_or_assign(std::move(key), std::move(value));
        } catch (const InputError& e) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return kv;
}

std::pair<std::string, std::string> parse_assignment(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw InputError("expected key = value, got \"" + trim(text) + "\"");
    auto key = trim(text.substr(0, eq));
    if (key.empty())
        throw InputError("empty key");
    return {key, trim(text.substr(eq + 1))};
}

void apply_key_values(ExperimentConfig& cfg, const KeyValues& kv)
{
    const auto& table = fields();
    for (const auto& [key, value] : kv) {
        const auto it = table.find(key);
        if (it == table.end())
            throw InputError("unknown config key \"" + key + "\"");
        it->second.set(cfg, value, key);
    }
}

KeyValues to_key_values(const ExperimentConfig& cfg)
{
    KeyValues kv;
    for (const auto& [key, field] : fields())
        kv[key] = field.get(cfg);
    return kv;
}

} // namespace vgr
