#include "nsfv/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nsfv/errors.hpp"

namespace nsfv {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, int line, const std::string& key) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw ConfigError("'" + key + "' expects a number, got '" + t + "'", line);
    return v;
}

int parse_int(const std::string& text, int line, const std::string& key) {
    const std::string t = trim(text);
    int v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw ConfigError("'" + key + "' expects an integer, got '" + t + "'", line);
    return v;
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + t + "'", line);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : text) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

std::vector<double> parse_double_list(const std::string& text, int line, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(item, line, key));
    return out;
}

std::vector<int> parse_int_list(const std::string& text, int line, const std::string& key) {
    std::vector<int> out;
    for (const auto& item : split_list(text)) out.push_back(parse_int(item, line, key));
    return out;
}

std::string num(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_same_v<T, double>) out += num(v[i]);
        else out += std::to_string(v[i]);
    }
    return out;
}

struct Entry {
    std::string key;
    std::string value;
    int line;
};

// Recursive-descent reader for the coefficient grammar.
class CoefficientReader {
public:
    explicit CoefficientReader(std::string_view s) : s_(s) {}

    CoefficientFn read() {
        CoefficientFn f = term();
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
        return f;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("bad coefficient '" + std::string(s_) + "': " + what);
    }
    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    void expect(char c) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    double number() {
        skip();
        double v = 0.0;
        const auto r = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (r.ec != std::errc()) fail("expected a number");
        pos_ = static_cast<std::size_t>(r.ptr - s_.data());
        return v;
    }
    std::vector<double> numbers(std::size_t count) {
        expect('(');
        std::vector<double> v;
        for (std::size_t i = 0; i < count; ++i) {
            if (i) expect(',');
            v.push_back(number());
        }
        expect(')');
        return v;
    }
    CoefficientFn term() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string_view name = s_.substr(start, pos_ - start);
        if (name.empty()) return CoefficientFn::constant(number());
        if (name == "constant") return CoefficientFn::constant(numbers(1)[0]);
        if (name == "power") {
            const auto v = numbers(2);
            return CoefficientFn::power(v[0], v[1]);
        }
        if (name == "rational") {
            const auto v = numbers(4);
            return CoefficientFn::rational_power(v[0], v[1], v[2], v[3]);
        }
        if (name == "sum") {
            expect('(');
            std::vector<CoefficientFn> terms{term()};
            skip();
            while (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
                terms.push_back(term());
                skip();
            }
            expect(')');
            return CoefficientFn::sum(std::move(terms));
        }
        fail("unknown function '" + std::string(name) + "'");
    }
};

VirialLaw preset(const std::string& name, int line) {
    if (name == "reference") return laws::reference();
    if (name == "nonmonotone_demo") return laws::nonmonotone_demo();
    if (name == "concave") return laws::concave();
    if (name == "constant_b2") return laws::constant_b2();
    if (name == "nonconcave") return laws::nonconcave();
    throw ConfigError("unknown law preset '" + name + "'", line);
}

void build_law(VirialLaw& law, const std::vector<Entry>& entries) {
    for (const auto& e : entries)
        if (e.key == "preset") law = preset(trim(e.value), e.line);
    for (const auto& e : entries) {
        if (e.key != "n_trunc") continue;
        const int n = parse_int(e.value, e.line, e.key);
        if (n < 1 || n > 9) throw ConfigError("n_trunc must lie in 1..9", e.line);
        law.n_trunc = n;
        law.b.resize(static_cast<std::size_t>(n) + 1, CoefficientFn::constant(0.0));
        law.b_bar.resize(static_cast<std::size_t>(n) + 1, 0.0);
    }
    const std::map<std::string, double VirialLaw::*> scalars{
        {"gamma", &VirialLaw::gamma},     {"gamma_theta", &VirialLaw::gamma_theta},
        {"alpha", &VirialLaw::alpha},     {"alpha_bar", &VirialLaw::alpha_bar},
        {"mu", &VirialLaw::mu},           {"lambda", &VirialLaw::lambda},
        {"kappa_a", &VirialLaw::kappa_a}, {"kappa_b", &VirialLaw::kappa_b},
        {"m_const", &VirialLaw::m_const}};
    for (const auto& e : entries) {
        if (e.key == "preset" || e.key == "n_trunc") continue;
        if (auto it = scalars.find(e.key); it != scalars.end()) {
            law.*(it->second) = parse_double(e.value, e.line, e.key);
        } else if (e.key == "b1_constant") {
            law.b1_constant = parse_double(e.value, e.line, e.key);
            law.b[1] = CoefficientFn::constant(law.b1_constant);
        } else if (e.key == "b_bar") {
            const auto v = parse_double_list(e.value, e.line, e.key);
            if (v.size() != law.b_bar.size())
                throw ConfigError("b_bar needs n_trunc+1 = " + std::to_string(law.b_bar.size()) + " values", e.line);
            law.b_bar = v;
        } else if (e.key.size() == 2 && e.key[0] == 'b' && std::isdigit(static_cast<unsigned char>(e.key[1]))) {
            const int idx = e.key[1] - '0';
            if (idx > law.n_trunc) throw ConfigError("coefficient " + e.key + " exceeds n_trunc", e.line);
            try {
                law.b[static_cast<std::size_t>(idx)] = parse_coefficient(e.value);
            } catch (const ConfigError& err) {
                throw ConfigError(err.what(), e.line);
            }
            if (idx == 1 && law.b[1].kind() == CoefficientFn::Kind::constant) law.b1_constant = law.b[1].amplitude();
        } else {
            throw ConfigError("unknown key '" + e.key + "' in [law]", e.line);
        }
    }
    try {
        law.check_shape();
    } catch (const ConfigError& err) {
        throw ConfigError(std::string(err.what()) + " (B_1 must be constant(b1_constant))");
    }
}

using Setter = std::function<void(RunConfig&, const std::string&, int, const std::string&)>;

Setter real(double RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v, int line, const std::string& k) {
        c.*field = parse_double(v, line, k);
    };
}
Setter integer(int RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v, int line, const std::string& k) {
        c.*field = parse_int(v, line, k);
    };
}

std::string profile_kind(const std::string& v, int line) {
    const std::string t = trim(v);
    if (t == "uniform" || t == "sine" || t == "file") return t;
    throw ConfigError("profile must be uniform, sine or file, got '" + t + "'", line);
}

const std::map<std::string, std::map<std::string, Setter>>& setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table{
        {"grid",
         {{"dim", integer(&RunConfig::dim)}, {"n", integer(&RunConfig::n)}, {"length", real(&RunConfig::length)}}},
        {"time",
         {{"t_final", real(&RunConfig::t_final)},
          {"slab_length", real(&RunConfig::slab_length)},
          {"cfl", real(&RunConfig::cfl)},
          {"thermal_steps_per_slab", integer(&RunConfig::thermal_steps_per_slab)}}},
        {"fixed_point",
         {{"omega", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.fixed_point.omega = parse_double(v, l, k);
           }},
          {"tol", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.fixed_point.tol = parse_double(v, l, k);
           }},
          {"max_iter", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.fixed_point.max_iter = parse_int(v, l, k);
           }}}},
        {"regularization",
         {{"eps", real(&RunConfig::eps)},
          {"continuation", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.continuation = parse_double_list(v, l, k);
           }}}},
        {"initial",
         {{"rho_profile", [](RunConfig& c, const std::string& v, int l, const std::string&) {
               c.initial.rho.kind = profile_kind(v, l);
           }},
          {"rho_mean", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.initial.rho.mean = parse_double(v, l, k);
           }},
          {"rho_amplitude", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.initial.rho.amplitude = parse_double(v, l, k);
           }},
          {"theta_profile", [](RunConfig& c, const std::string& v, int l, const std::string&) {
               c.initial.theta.kind = profile_kind(v, l);
           }},
          {"theta_mean", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.initial.theta.mean = parse_double(v, l, k);
           }},
          {"theta_amplitude", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.initial.theta.amplitude = parse_double(v, l, k);
           }},
          {"u_profile", [](RunConfig& c, const std::string& v, int l, const std::string&) {
               c.initial.u.kind = profile_kind(v, l);
           }},
          {"u_mean", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.initial.u.mean = parse_double(v, l, k);
           }},
          {"u_amplitude", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.initial.u.amplitude = parse_double(v, l, k);
           }},
          {"mode", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.initial.mode = parse_int(v, l, k);
           }},
          {"file", [](RunConfig& c, const std::string& v, int, const std::string&) { c.initial.file = trim(v); }}}},
        {"output",
         {{"directory", [](RunConfig& c, const std::string& v, int, const std::string&) { c.out_dir = trim(v); }},
          {"snapshot_every", integer(&RunConfig::snapshot_every)},
          {"csv", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.csv = parse_bool(v, l, k);
           }}}},
        {"validator",
         {{"theta_lo", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.scan.theta_lo = parse_double(v, l, k);
           }},
          {"theta_hi", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.scan.theta_hi = parse_double(v, l, k);
           }},
          {"rho_lo", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.scan.rho_lo = parse_double(v, l, k);
           }},
          {"rho_hi", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.scan.rho_hi = parse_double(v, l, k);
           }},
          {"points", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.scan.points = parse_int(v, l, k);
           }},
          {"spacing", [](RunConfig& c, const std::string& v, int l, const std::string&) {
               const std::string t = trim(v);
               if (t == "log") c.scan.spacing = ScanGrid::Spacing::log;
               else if (t == "linear") c.scan.spacing = ScanGrid::Spacing::linear;
               else throw ConfigError("spacing must be log or linear", l);
           }},
          {"theta_split", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.validator.theta_split = parse_double(v, l, k);
           }},
          {"exponent_slack", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.validator.exponent_slack = parse_double(v, l, k);
           }},
          {"force", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.force = parse_bool(v, l, k);
           }}}},
        {"diagnostics", {{"c_tol", real(&RunConfig::c_tol)}}},
        {"mms",
         {{"module", [](RunConfig& c, const std::string& v, int l, const std::string&) {
               const std::string t = trim(v);
               if (t != "thermal" && t != "hydro") throw ConfigError("mms module must be thermal or hydro", l);
               c.mms.module = t;
           }},
          {"resolutions", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.mms.resolutions = parse_int_list(v, l, k);
           }},
          {"steps", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.mms.steps = parse_int_list(v, l, k);
           }},
          {"time_n", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.mms.time_n = parse_int(v, l, k);
           }},
          {"t_final", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.mms.t_final = parse_double(v, l, k);
           }},
          {"amplitude", [](RunConfig& c, const std::string& v, int l, const std::string& k) {
               c.mms.amplitude = parse_double(v, l, k);
           }}}},
    };
    return table;
}

// Field invariants; `lines` maps "section.key" to the line that set it.
void check_invariants(const RunConfig& c, const std::map<std::string, int>& lines) {
    auto at = [&](const std::string& k) {
        const auto it = lines.find(k);
        return it == lines.end() ? 0 : it->second;
    };
    if (c.dim != 1 && c.dim != 2) throw ConfigError("grid dim must be 1 or 2", at("grid.dim"));
    if (c.n < 8) throw ConfigError("grid n must be at least 8", at("grid.n"));
    if (!(c.length > 0.0)) throw ConfigError("grid length must be positive", at("grid.length"));
    if (!(c.t_final > 0.0)) throw ConfigError("t_final must be positive", at("time.t_final"));
    if (!(c.slab_length > 0.0)) throw ConfigError("slab_length must be positive", at("time.slab_length"));
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]", at("time.cfl"));
    if (c.thermal_steps_per_slab < 1)
        throw ConfigError("thermal_steps_per_slab must be at least 1", at("time.thermal_steps_per_slab"));
    if (!(c.fixed_point.omega > 0.0 && c.fixed_point.omega <= 1.0))
        throw ConfigError("omega must lie in (0, 1]", at("fixed_point.omega"));
    if (!(c.fixed_point.tol > 0.0)) throw ConfigError("tol must be positive", at("fixed_point.tol"));
    if (c.fixed_point.max_iter < 1) throw ConfigError("max_iter must be at least 1", at("fixed_point.max_iter"));
    if (!(c.eps > 0.0)) throw ConfigError("eps must be positive", at("regularization.eps"));
    for (double e : c.continuation)
        if (!(e > 0.0)) throw ConfigError("continuation values must be positive", at("regularization.continuation"));
    if (c.snapshot_every < 0) throw ConfigError("snapshot_every must be non-negative", at("output.snapshot_every"));
    if (c.initial.mode < 1) throw ConfigError("mode must be at least 1", at("initial.mode"));
    const bool any_file =
        c.initial.rho.kind == "file" || c.initial.theta.kind == "file" || c.initial.u.kind == "file";
    if (any_file && c.initial.file.empty()) throw ConfigError("a file profile needs [initial] file", at("initial.file"));
    if (!(c.c_tol > 0.0)) throw ConfigError("c_tol must be positive", at("diagnostics.c_tol"));
    try {
        c.scan.check();
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), at("validator.points"));
    }
    for (int r : c.mms.resolutions)
        if (r < 8) throw ConfigError("mms resolutions must be at least 8", at("mms.resolutions"));
}

}  // namespace

CoefficientFn parse_coefficient(const std::string& text) { return CoefficientReader(text).read(); }

FixedPointConfig RunConfig::fixed_point_config() const {
    FixedPointConfig f = fixed_point;
    f.slab_length = slab_length;
    f.steps_per_slab = thermal_steps_per_slab;
    return f;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<Entry> law_entries;
    std::map<std::string, int> lines;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("malformed section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section != "law" && !setters().contains(section))
                throw ConfigError("unknown section [" + section + "]", line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        if (section.empty()) throw ConfigError("key outside any section", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const std::string full = section + "." + key;
        if (lines.contains(full)) throw ConfigError("duplicate key '" + key + "'", line);
        lines[full] = line;
        if (section == "law") {
            law_entries.push_back({key, value, line});
            continue;
        }
        const auto& table = setters().at(section);
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
        it->second(cfg, value, line, key);
    }
    build_law(cfg.law, law_entries);
    check_invariants(cfg, lines);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg = parse_config(ss.str());
    const auto parent = std::filesystem::path(path).parent_path();
    cfg.base_dir = parent.empty() ? "." : parent.string();
    return cfg;
}

ValidationReport check_admissible(const RunConfig& cfg) {
    ValidationReport rep = validate_law(cfg.law, cfg.dim, cfg.scan, cfg.validator);
    const auto bad = rep.failures();
    if (!bad.empty() && !cfg.force) {
        std::string ids;
        for (const auto& id : bad) ids += (ids.empty() ? "" : ", ") + id;
        throw ConfigError("law fails validator checks: " + ids + " (set force = true in [validator] to run anyway)");
    }
    return rep;
}

std::string to_text(const RunConfig& c) {
    std::ostringstream os;
    const VirialLaw& l = c.law;
    os << "[law]\n"
       << "gamma = " << num(l.gamma) << "\ngamma_theta = " << num(l.gamma_theta) << "\nalpha = " << num(l.alpha)
       << "\nalpha_bar = " << num(l.alpha_bar) << "\nn_trunc = " << l.n_trunc << "\n";
    for (int i = 0; i <= l.n_trunc; ++i)
        if (i != 1) os << "b" << i << " = " << l.b[static_cast<std::size_t>(i)].to_string() << "\n";
    os << "b1_constant = " << num(l.b1_constant) << "\nb_bar = " << join(l.b_bar) << "\nmu = " << num(l.mu)
       << "\nlambda = " << num(l.lambda) << "\nkappa_a = " << num(l.kappa_a) << "\nkappa_b = " << num(l.kappa_b)
       << "\nm_const = " << num(l.m_const) << "\n\n";
    os << "[grid]\ndim = " << c.dim << "\nn = " << c.n << "\nlength = " << num(c.length) << "\n\n";
    os << "[time]\nt_final = " << num(c.t_final) << "\nslab_length = " << num(c.slab_length)
       << "\ncfl = " << num(c.cfl) << "\nthermal_steps_per_slab = " << c.thermal_steps_per_slab << "\n\n";
    os << "[fixed_point]\nomega = " << num(c.fixed_point.omega) << "\ntol = " << num(c.fixed_point.tol)
       << "\nmax_iter = " << c.fixed_point.max_iter << "\n\n";
    os << "[regularization]\neps = " << num(c.eps) << "\n";
    if (!c.continuation.empty()) os << "continuation = " << join(c.continuation) << "\n";
    os << "\n[initial]\n";
    auto profile = [&](const char* name, const ProfileSpec& p) {
        os << name << "_profile = " << p.kind << "\n"
           << name << "_mean = " << num(p.mean) << "\n"
           << name << "_amplitude = " << num(p.amplitude) << "\n";
    };
    profile("rho", c.initial.rho);
    profile("theta", c.initial.theta);
    profile("u", c.initial.u);
    os << "mode = " << c.initial.mode << "\n";
    if (!c.initial.file.empty()) os << "file = " << c.initial.file << "\n";
    os << "\n[output]\ndirectory = " << c.out_dir << "\nsnapshot_every = " << c.snapshot_every
       << "\ncsv = " << (c.csv ? "true" : "false") << "\n\n";
    os << "[validator]\ntheta_lo = " << num(c.scan.theta_lo) << "\ntheta_hi = " << num(c.scan.theta_hi)
       << "\nrho_lo = " << num(c.scan.rho_lo) << "\nrho_hi = " << num(c.scan.rho_hi) << "\npoints = " << c.scan.points
       << "\nspacing = " << (c.scan.spacing == ScanGrid::Spacing::log ? "log" : "linear")
       << "\ntheta_split = " << num(c.validator.theta_split) << "\nexponent_slack = " << num(c.validator.exponent_slack)
       << "\nforce = " << (c.force ? "true" : "false") << "\n\n";
    os << "[diagnostics]\nc_tol = " << num(c.c_tol) << "\n\n";
    os << "[mms]\nmodule = " << c.mms.module << "\nresolutions = " << join(c.mms.resolutions)
       << "\nsteps = " << join(c.mms.steps) << "\ntime_n = " << c.mms.time_n << "\nt_final = " << num(c.mms.t_final)
       << "\namplitude = " << num(c.mms.amplitude) << "\n";
    return os.str();
}

}  // namespace nsfv
