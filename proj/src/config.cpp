#include "optocirc/config.hpp"

#include "optocirc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

namespace optocirc {

namespace {

struct RawEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct RawSection {
    std::string name;
    int line = 0;
    std::vector<RawEntry> entries;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, int line, const std::string& key) {
    const std::string t = trim(s);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
        fail(line, "'" + key + "' expects a finite real number, got '" + t + "'");
    return v;
}

Complex parse_complex(const std::string& s, int line, const std::string& key) {
    const auto comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
        fail(line, "'" + key + "' expects a complex value written re,im, got '" + trim(s) + "'");
    return {parse_real(s.substr(0, comma), line, key), parse_real(s.substr(comma + 1), line, key)};
}

long long parse_integer(const std::string& s, int line, const std::string& key, long long lo) {
    const std::string t = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || v < lo)
        fail(line, "'" + key + "' expects an integer >= " + std::to_string(lo) + ", got '" + t + "'");
    return v;
}

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_complex(Complex z) { return fmt_real(z.real()) + "," + fmt_real(z.imag()); }

SweepAxis parse_axis(const std::string& s, int line, const std::string& key) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ':')) parts.push_back(trim(cur));
    if (parts.size() != 4 || parts[0].empty())
        fail(line, "'" + key + "' expects name:lo:hi:n, got '" + trim(s) + "'");
    SweepAxis ax;
    ax.name = parts[0];
    ax.lo = parse_real(parts[1], line, key);
    ax.hi = parse_real(parts[2], line, key);
    ax.n = static_cast<std::size_t>(parse_integer(parts[3], line, key, 1));
    return ax;
}

std::string fmt_axis(const SweepAxis& ax) {
    return ax.name + ":" + fmt_real(ax.lo) + ":" + fmt_real(ax.hi) + ":" + std::to_string(ax.n);
}

template <class T>
struct Field {
    std::string key;
    bool required;
    std::function<void(T&, const std::string&, int)> set;
    // Empty optional: nothing to serialize.
    std::function<std::optional<std::string>(const T&)> get;
};

template <class T>
Field<T> real_field(const char* key, double T::*m, bool required = true) {
    return {key, required, [m, key](T& t, const std::string& v, int line) { t.*m = parse_real(v, line, key); },
            [m](const T& t) { return std::optional<std::string>(fmt_real(t.*m)); }};
}

template <class T>
Field<T> complex_field(const char* key, Complex T::*m, bool required = true) {
    return {key, required, [m, key](T& t, const std::string& v, int line) { t.*m = parse_complex(v, line, key); },
            [m](const T& t) { return std::optional<std::string>(fmt_complex(t.*m)); }};
}

template <class T, class I>
Field<T> integer_field(const char* key, I T::*m, long long lo, bool required = false) {
    return {key, required,
            [m, key, lo](T& t, const std::string& v, int line) {
                const long long x = parse_integer(v, line, key, lo);
                if (std::cmp_greater(x, std::numeric_limits<I>::max())) fail(line, std::string("'") + key + "' is too large");
                t.*m = static_cast<I>(x);
            },
            [m](const T& t) { return std::optional<std::string>(std::to_string(t.*m)); }};
}

template <class T>
T bind(const RawSection& sec, const std::vector<Field<T>>& fields, T value) {
    std::vector<std::string> names;
    for (const auto& f : fields) names.push_back(f.key);
    std::vector<bool> seen(fields.size(), false);
    for (const RawEntry& e : sec.entries) {
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field<T>& f) { return f.key == e.key; });
        if (it == fields.end()) {
            const std::string hint = closest_match(e.key, names);
            fail(e.line, "unknown key '" + e.key + "' in [" + sec.name + "]"
                             + (hint.empty() ? std::string() : "; did you mean '" + hint + "'?"));
        }
        const std::size_t idx = static_cast<std::size_t>(it - fields.begin());
        if (seen[idx]) fail(e.line, "duplicate key '" + e.key + "' in [" + sec.name + "]");
        seen[idx] = true;
        it->set(value, e.value, e.line);
    }
    for (std::size_t k = 0; k < fields.size(); ++k)
        if (fields[k].required && !seen[k])
            fail(sec.line, "missing key '" + fields[k].key + "' in [" + sec.name + "]");
    return value;
}

template <class T>
void emit(std::ostringstream& os, const char* name, const T& value, const std::vector<Field<T>>& fields) {
    os << '[' << name << "]\n";
    for (const auto& f : fields) {
        const auto v = f.get(value);
        if (v) os << f.key << " = " << *v << '\n';
    }
    os << '\n';
}

const std::vector<Field<PhysicalParams>>& physical_fields() {
    using P = PhysicalParams;
    static const std::vector<Field<P>> f{
        real_field("omega_c1", &P::omega_c1), real_field("omega_c2", &P::omega_c2),
        real_field("omega_m1", &P::omega_m1), real_field("omega_m2", &P::omega_m2),
        real_field("g1", &P::g1),             real_field("g2", &P::g2),
        real_field("V", &P::V),               real_field("kappa1", &P::kappa1),
        real_field("kappa2", &P::kappa2),     real_field("gamma1", &P::gamma1),
        real_field("gamma2", &P::gamma2),     complex_field("eps1", &P::eps1),
        complex_field("eps2", &P::eps2),      real_field("omega_d1", &P::omega_d1),
        real_field("omega_d2", &P::omega_d2), real_field("phi", &P::phi, false),
    };
    return f;
}

// Phenomenological couplings and effective rates share one section.
const std::vector<Field<PhenomenologicalTemplate>>& phen_fields() {
    using T = PhenomenologicalTemplate;
    auto c = [](const char* key, double PhenomenologicalCouplings::*m) {
        return Field<T>{key, true,
                        [m, key](T& t, const std::string& v, int line) { t.couplings.*m = parse_real(v, line, key); },
                        [m](const T& t) { return std::optional<std::string>(fmt_real(t.couplings.*m)); }};
    };
    auto r = [](const char* key, double EffectiveRates::*m) {
        return Field<T>{key, true,
                        [m, key](T& t, const std::string& v, int line) { t.rates.*m = parse_real(v, line, key); },
                        [m](const T& t) { return std::optional<std::string>(fmt_real(t.rates.*m)); }};
    };
    using C = PhenomenologicalCouplings;
    using R = EffectiveRates;
    static const std::vector<Field<T>> f{
        c("G10", &C::G10),           c("G20", &C::G20),           c("V0", &C::V0),
        c("theta1", &C::theta1),     c("theta2", &C::theta2),     c("theta3", &C::theta3),
        r("delta_eff", &R::delta_eff), r("omega_eff1", &R::omega_eff1), r("omega_eff2", &R::omega_eff2),
        r("kappa_eff", &R::kappa_eff), r("gamma_eff1", &R::gamma_eff1), r("gamma_eff2", &R::gamma_eff2),
    };
    return f;
}

const std::vector<Field<LinearizedConfig>>& linearized_fields() {
    using T = LinearizedConfig;
    auto r = [](const char* key, double LinearizedModel::*m) {
        return Field<T>{key, true,
                        [m, key](T& t, const std::string& v, int line) { t.lm.*m = parse_real(v, line, key); },
                        [m](const T& t) { return std::optional<std::string>(fmt_real(t.lm.*m)); }};
    };
    auto c = [](const char* key, Complex LinearizedModel::*m) {
        return Field<T>{key, true,
                        [m, key](T& t, const std::string& v, int line) { t.lm.*m = parse_complex(v, line, key); },
                        [m](const T& t) { return std::optional<std::string>(fmt_complex(t.lm.*m)); }};
    };
    using L = LinearizedModel;
    static const std::vector<Field<T>> f{
        r("delta_c1_prime", &L::delta_c1_prime), r("delta_c2", &L::delta_c2),
        r("omega_m1", &L::omega_m1),             r("omega_m2", &L::omega_m2),
        c("G1", &L::G1),                         c("G2", &L::G2),
        real_field("J", &T::J),                  real_field("phi", &T::phi, false),
        r("V", &L::V),                           r("kappa1", &L::kappa1),
        r("kappa2", &L::kappa2),                 r("gamma1", &L::gamma1),
        r("gamma2", &L::gamma2),
    };
    return f;
}

Complex link_from(double J, double phi) {
    const double a = normalize_angle(phi);
    if (a == 0.0) return {J, 0.0};
    if (a == pi / 2.0) return {0.0, -J};
    if (a == pi) return {-J, 0.0};
    if (a == 3.0 * pi / 2.0) return {0.0, J};
    return std::polar(J, -a);
}

const std::vector<Field<FrequencyGrid>>& grid_fields() {
    using G = FrequencyGrid;
    static const std::vector<Field<G>> f{
        real_field("omega_min", &G::omega_min),
        real_field("omega_max", &G::omega_max),
        integer_field("n", &G::n, 1, true),
    };
    return f;
}

const std::vector<Field<SweepConfig>>& sweep_fields() {
    using S = SweepConfig;
    auto axis = [](const char* key, std::size_t idx, bool required) {
        return Field<S>{key, required,
                        [key, idx](S& s, const std::string& v, int line) {
                            if (s.axes.size() <= idx) s.axes.resize(idx + 1);
                            s.axes[idx] = parse_axis(v, line, key);
                        },
                        [idx](const S& s) {
                            return s.axes.size() > idx ? std::optional<std::string>(fmt_axis(s.axes[idx]))
                                                       : std::nullopt;
                        }};
    };
    static const std::vector<Field<S>> f{
        axis("axis1", 0, true),
        axis("axis2", 1, false),
        {"metric", true, [](S& s, const std::string& v, int) { s.metric = trim(v); },
         [](const S& s) { return std::optional<std::string>(s.metric); }},
        integer_field("threads", &S::threads, 0),
    };
    return f;
}

const std::vector<Field<BellConfig>>& bell_fields() {
    using B = BellConfig;
    static const std::vector<Field<B>> f{
        real_field("theta_min", &B::theta_min, false),   real_field("theta_max", &B::theta_max, false),
        integer_field("theta_n", &B::theta_n, 1),        real_field("alpha2_min", &B::alpha2_min, false),
        real_field("alpha2_max", &B::alpha2_max, false), integer_field("alpha2_n", &B::alpha2_n, 1),
        integer_field("n_trunc", &B::n_trunc, 4),        real_field("oracle_theta", &B::oracle_theta, false),
    };
    return f;
}

const std::vector<Field<SearchConfig>>& search_fields() {
    using S = SearchConfig;
    static const std::vector<Field<S>> f{
        {"magnitude", false, [](S& s, const std::string& v, int line) { s.magnitude = parse_real(v, line, "magnitude"); },
         [](const S& s) { return s.magnitude ? std::optional<std::string>(fmt_real(*s.magnitude)) : std::nullopt; }},
        integer_field("phase_points", &S::phase_points, 3),
        integer_field("omega_points", &S::omega_points, 1),
    };
    return f;
}

const std::vector<Field<SolverConfig>>& solver_fields() {
    using S = SolverConfig;
    static const std::vector<Field<S>> f{
        real_field("tol", &S::tol, false),
        integer_field("max_iter", &S::max_iter, 1),
        real_field("validity_threshold", &S::validity_threshold, false),
    };
    return f;
}

const std::vector<Field<OutputConfig>>& output_fields() {
    using O = OutputConfig;
    static const std::vector<Field<O>> f{
        {"path", false, [](O& o, const std::string& v, int) { o.path = trim(v); },
         [](const O& o) { return std::optional<std::string>(o.path); }},
        {"format", false,
         [](O& o, const std::string& v, int line) {
             o.format = trim(v);
             if (o.format != "csv") fail(line, "unsupported output format '" + o.format + "' (supported: csv)");
         },
         [](const O& o) { return std::optional<std::string>(o.format); }},
    };
    return f;
}

const std::vector<std::string>& section_names() {
    static const std::vector<std::string> s{"physical", "phenomenological", "linearized", "grid", "sweep",
                                            "bell",     "search",           "solver",     "output"};
    return s;
}

std::vector<RawSection> tokenize(const std::string& text) {
    std::vector<RawSection> sections;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3) fail(line, "malformed section header '" + s + "'");
            const std::string name = trim(s.substr(1, s.size() - 2));
            const auto& known = section_names();
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                const std::string hint = closest_match(name, known);
                fail(line, "unknown section [" + name + "]" + (hint.empty() ? std::string() : "; did you mean [" + hint + "]?"));
            }
            for (const RawSection& prev : sections)
                if (prev.name == name) fail(line, "duplicate section [" + name + "]");
            sections.push_back({name, line, {}});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) fail(line, "missing key before '='");
        if (sections.empty()) fail(line, "key '" + key + "' appears before any [section] header");
        sections.back().entries.push_back({key, s.substr(eq + 1), line});
    }
    return sections;
}

} // namespace

bool operator==(const PhenomenologicalTemplate& a, const PhenomenologicalTemplate& b) {
    return a.couplings == b.couplings && a.rates == b.rates;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.physical == b.physical && a.phenomenological == b.phenomenological && a.linearized == b.linearized
           && a.grid == b.grid && a.sweep == b.sweep && a.bell == b.bell && a.search == b.search
           && a.solver == b.solver && a.output == b.output;
}

std::string closest_match(const std::string& word, const std::vector<std::string>& candidates) {
    std::string best;
    std::size_t best_d = std::numeric_limits<std::size_t>::max();
    for (const std::string& c : candidates) {
        std::vector<std::size_t> prev(c.size() + 1), cur(c.size() + 1);
        for (std::size_t j = 0; j <= c.size(); ++j) prev[j] = j;
        for (std::size_t i = 1; i <= word.size(); ++i) {
            cur[0] = i;
            for (std::size_t j = 1; j <= c.size(); ++j) {
                const std::size_t sub = prev[j - 1] + (std::tolower(word[i - 1]) == std::tolower(c[j - 1]) ? 0 : 1);
                cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            }
            std::swap(prev, cur);
        }
        if (prev[c.size()] < best_d) {
            best_d = prev[c.size()];
            best = c;
        }
    }
    const std::size_t limit = std::max<std::size_t>(2, word.size() / 3);
    return best_d <= limit ? best : std::string();
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    for (const RawSection& sec : tokenize(text)) {
        if (sec.name == "physical") {
            cfg.physical = bind(sec, physical_fields(), PhysicalParams{});
        } else if (sec.name == "phenomenological") {
            cfg.phenomenological = bind(sec, phen_fields(), PhenomenologicalTemplate{});
        } else if (sec.name == "linearized") {
            LinearizedConfig lt = bind(sec, linearized_fields(), LinearizedConfig{});
            lt.lm.cJ = link_from(lt.J, lt.phi);
            cfg.linearized = lt;
        } else if (sec.name == "grid") {
            cfg.grid = bind(sec, grid_fields(), FrequencyGrid{});
        } else if (sec.name == "sweep") {
            cfg.sweep = bind(sec, sweep_fields(), SweepConfig{});
        } else if (sec.name == "bell") {
            cfg.bell = bind(sec, bell_fields(), BellConfig{});
        } else if (sec.name == "search") {
            cfg.search = bind(sec, search_fields(), SearchConfig{});
        } else if (sec.name == "solver") {
            cfg.solver = bind(sec, solver_fields(), SolverConfig{});
        } else if (sec.name == "output") {
            cfg.output = bind(sec, output_fields(), OutputConfig{});
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config file '" + path + "'");
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    if (cfg.physical) emit(os, "physical", *cfg.physical, physical_fields());
    if (cfg.phenomenological) emit(os, "phenomenological", *cfg.phenomenological, phen_fields());
    if (cfg.linearized) emit(os, "linearized", *cfg.linearized, linearized_fields());
    if (cfg.grid) emit(os, "grid", *cfg.grid, grid_fields());
    if (cfg.sweep) emit(os, "sweep", *cfg.sweep, sweep_fields());
    if (cfg.bell) emit(os, "bell", *cfg.bell, bell_fields());
    if (cfg.search) emit(os, "search", *cfg.search, search_fields());
    if (cfg.solver) emit(os, "solver", *cfg.solver, solver_fields());
    if (cfg.output) emit(os, "output", *cfg.output, output_fields());
    return os.str();
}

FrequencyGrid parse_grid_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(spec);
    while (std::getline(is, cur, ':')) parts.push_back(cur);
    if (parts.size() != 3) throw ConfigError("--grid expects omega_min:omega_max:N, got '" + spec + "'");
    FrequencyGrid g;
    try {
        g.omega_min = parse_real(parts[0], 0, "omega_min");
        g.omega_max = parse_real(parts[1], 0, "omega_max");
        g.n = static_cast<std::size_t>(parse_integer(parts[2], 0, "N", 1));
    } catch (const ConfigError&) {
        throw ConfigError("--grid expects omega_min:omega_max:N, got '" + spec + "'");
    }
    return g;
}

} // namespace optocirc
