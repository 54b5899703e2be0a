#include "plns/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "plns/errors.hpp"
#include "plns/rng.hpp"
#include "plns/snapshot.hpp"

namespace plns {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string value;
    int line = 0;
};

[[noreturn]] void malformed(const Entry& e, const std::string& key, const std::string& want) {
    std::ostringstream os;
    os << "config line " << e.line << ": key '" << key << "': cannot parse '" << e.value
       << "' as " << want;
    throw InvalidInput(os.str());
}

double to_double(const Entry& e, const std::string& key) {
    const std::string& v = e.value;
    if (v == "inf") return std::numeric_limits<double>::infinity();
    const char* begin = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !(std::isfinite(x)))
        malformed(e, key, "a number");
    return x;
}

long long to_int(const Entry& e, const std::string& key) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const long long x = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0') malformed(e, key, "an integer");
    return x;
}

std::uint64_t to_u64(const Entry& e, const std::string& key) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const unsigned long long x = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || e.value[0] == '-')
        malformed(e, key, "a non-negative integer");
    return x;
}

// Pulls entries out of the parsed map; whatever remains at the end is an
// unknown key. Missing keys keep the caller-supplied default.
class Keys {
public:
    explicit Keys(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) {
        return entries_.count(key) != 0;
    }

    std::optional<Entry> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        Entry e = it->second;
        entries_.erase(it);
        return e;
    }

    Entry require(const std::string& key) {
        auto e = take(key);
        if (!e) throw InvalidInput("config: missing required key '" + key + "'");
        return *e;
    }

    void number(const std::string& key, double& out) {
        if (auto e = take(key)) out = to_double(*e, key);
    }

    void integer(const std::string& key, int& out) {
        if (auto e = take(key)) out = static_cast<int>(to_int(*e, key));
    }

    void u64(const std::string& key, std::uint64_t& out) {
        if (auto e = take(key)) out = to_u64(*e, key);
    }

    void string(const std::string& key, std::string& out) {
        if (auto e = take(key)) out = e->value;
    }

    void choice(const std::string& key, std::string& out,
                const std::vector<std::string>& allowed) {
        auto e = take(key);
        if (!e) return;
        for (const auto& a : allowed)
            if (e->value == a) {
                out = e->value;
                return;
            }
        std::ostringstream os;
        os << "config line " << e->line << ": key '" << key << "': expected one of ";
        for (std::size_t i = 0; i < allowed.size(); ++i)
            os << (i ? ", " : "") << allowed[i];
        os << ", got '" << e->value << "'";
        throw InvalidInput(os.str());
    }

    void finish() const {
        if (entries_.empty()) return;
        // Report the unknown key that appears first in the file.
        const Entry* first = nullptr;
        const std::string* name = nullptr;
        for (const auto& [key, entry] : entries_)
            if (!first || entry.line < first->line) {
                first = &entry;
                name = &key;
            }
        std::ostringstream os;
        os << "config line " << first->line << ": unknown key '" << *name << "'";
        throw InvalidInput(os.str());
    }

private:
    std::map<std::string, Entry> entries_;
};

void push_echo(RunConfig& rc, const std::string& key, const std::string& value) {
    rc.echo.emplace_back(key, value);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, Entry> entries;
    {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (s.empty()) continue;
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                std::ostringstream os;
                os << "config line " << line_no << ": expected key=value, got '" << s << "'";
                throw InvalidInput(os.str());
            }
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty()) {
                std::ostringstream os;
                os << "config line " << line_no << ": empty key";
                throw InvalidInput(os.str());
            }
            auto it = entries.find(key);
            if (it != entries.end()) {
                std::ostringstream os;
                os << "config: duplicate key '" << key << "' (lines " << it->second.line
                   << " and " << line_no << ")";
                throw InvalidInput(os.str());
            }
            entries[key] = Entry{value, line_no};
        }
    }

    Keys keys(std::move(entries));
    RunConfig rc;

    rc.dim = static_cast<int>(to_int(keys.require("dim"), "dim"));
    rc.n = static_cast<int>(to_int(keys.require("n"), "n"));
    rc.dt = to_double(keys.require("dt"), "dt");
    rc.t_end = to_double(keys.require("T_end"), "T_end");

    keys.integer("N", rc.nmodes);
    keys.number("gamma", rc.gamma);
    keys.number("delta", rc.delta);
    std::string mode = "theorem";
    keys.choice("mode", mode, {"theorem", "potential"});
    rc.theorem_mode = mode == "theorem";
    std::string integ = "rk2";
    keys.choice("integrator", integ, {"rk2", "semi-implicit"});
    rc.integrator = integ == "rk2" ? Integrator::explicit_rk2 : Integrator::semi_implicit;
    std::string trans = "upwind";
    keys.choice("transport", trans, {"upwind", "muscl"});
    rc.transport = trans == "upwind" ? TransportScheme::upwind : TransportScheme::muscl;
    keys.number("cfl_safety", rc.cfl_safety);
    keys.number("blowup1_max", rc.blowup1_max);
    keys.integer("snapshot_cadence", rc.snapshot_cadence);
    keys.u64("seed", rc.seed);
    keys.string("output_dir", rc.output_dir);
    keys.choice("log_level", rc.log_level, {"quiet", "info", "debug"});
    if (auto e = keys.take("dtilde_q")) {
        rc.dtilde_q.clear();
        for (const auto& item : split(e->value, ','))
            rc.dtilde_q.push_back(to_double(Entry{item, e->line}, "dtilde_q"));
        if (rc.dtilde_q.empty()) malformed(*e, "dtilde_q", "a comma-separated list of exponents");
    }

    keys.choice("p.kind", rc.p.kind, {"constant", "preset", "file"});
    keys.number("p.constant", rc.p.constant);
    keys.choice("p.preset", rc.p.preset, {"sin_x", "sin_xy", "sin_tx"});
    keys.number("p.base", rc.p.base);
    keys.number("p.amplitude", rc.p.amplitude);
    keys.string("p.file", rc.p.file);

    keys.choice("rho0.kind", rc.rho0.kind, {"constant", "preset", "file"});
    keys.number("rho0.constant", rc.rho0.constant);
    keys.choice("rho0.preset", rc.rho0.preset, {"sin_x"});
    keys.number("rho0.base", rc.rho0.base);
    keys.number("rho0.amplitude", rc.rho0.amplitude);
    keys.string("rho0.file", rc.rho0.file);

    keys.choice("u0.kind", rc.u0.kind, {"zero", "preset", "file"});
    keys.choice("u0.preset", rc.u0.preset, {"sin_x", "random"});
    keys.number("u0.amplitude", rc.u0.amplitude);
    keys.string("u0.file", rc.u0.file);

    keys.choice("m0.kind", rc.m0.kind, {"none", "file"});
    keys.string("m0.file", rc.m0.file);

    keys.choice("forcing.kind", rc.forcing.kind, {"zero", "constant"});
    if (auto e = keys.take("forcing.value")) {
        const auto parts = split(e->value, ',');
        if (static_cast<int>(parts.size()) != rc.dim) {
            std::ostringstream os;
            os << "config line " << e->line << ": key 'forcing.value': expected " << rc.dim
               << " comma-separated components";
            throw InvalidInput(os.str());
        }
        for (std::size_t i = 0; i < parts.size(); ++i)
            rc.forcing.value[i] = to_double(Entry{parts[i], e->line}, "forcing.value");
    }

    keys.finish();

    // Value validation with named messages.
    if (rc.dim < 1 || rc.dim > 3) throw InvalidInput("config: dim must be 1, 2 or 3");
    if (rc.n < 4 || rc.n % 2 != 0)
        throw InvalidInput("config: n must be an even integer >= 4");
    if (!(rc.dt > 0.0)) throw InvalidInput("config: dt must be positive");
    if (!(rc.t_end > 0.0)) throw InvalidInput("config: T_end must be positive");
    if (rc.nmodes < 1) throw InvalidInput("config: N must be at least 1");
    if (!(rc.delta > 0.0)) throw InvalidInput("config: delta must be positive");
    if (!(rc.gamma > 1.0)) throw InvalidInput("config: gamma must exceed 1");
    if (rc.theorem_mode && rc.gamma < 1.5) {
        std::ostringstream os;
        os << "config: gamma below 3/2 (theorem mode requires gamma >= 1.5, got "
           << fmt17(rc.gamma) << ")";
        throw InvalidInput(os.str());
    }
    if (!(rc.cfl_safety > 0.0) || rc.cfl_safety > 1.0)
        throw InvalidInput("config: cfl_safety must lie in (0, 1]");
    if (!(rc.blowup1_max > 0.0)) throw InvalidInput("config: blowup1_max must be positive");
    if (rc.snapshot_cadence < 0)
        throw InvalidInput("config: snapshot_cadence must be non-negative");
    for (double q : rc.dtilde_q)
        if (!(q >= 1.0)) throw InvalidInput("config: dtilde_q entries must be >= 1");
    if (rc.u0.kind != "zero" && rc.m0.kind != "none")
        throw InvalidInput("config: provide u0 or m0, not both");

    // Canonical echo of the effective settings.
    push_echo(rc, "dim", std::to_string(rc.dim));
    push_echo(rc, "n", std::to_string(rc.n));
    push_echo(rc, "dt", fmt17(rc.dt));
    push_echo(rc, "T_end", fmt17(rc.t_end));
    push_echo(rc, "N", std::to_string(rc.nmodes));
    push_echo(rc, "gamma", fmt17(rc.gamma));
    push_echo(rc, "delta", fmt17(rc.delta));
    push_echo(rc, "mode", mode);
    push_echo(rc, "integrator", integ);
    push_echo(rc, "transport", trans);
    push_echo(rc, "cfl_safety", fmt17(rc.cfl_safety));
    push_echo(rc, "blowup1_max", fmt17(rc.blowup1_max));
    push_echo(rc, "snapshot_cadence", std::to_string(rc.snapshot_cadence));
    push_echo(rc, "seed", std::to_string(rc.seed));
    push_echo(rc, "output_dir", rc.output_dir);
    push_echo(rc, "log_level", rc.log_level);
    {
        std::string qs;
        for (std::size_t i = 0; i < rc.dtilde_q.size(); ++i)
            qs += (i ? "," : "") + (std::isinf(rc.dtilde_q[i]) ? std::string("inf")
                                                               : fmt17(rc.dtilde_q[i]));
        push_echo(rc, "dtilde_q", qs);
    }
    push_echo(rc, "p.kind", rc.p.kind);
    if (rc.p.kind == "constant") {
        push_echo(rc, "p.constant", fmt17(rc.p.constant));
    } else if (rc.p.kind == "preset") {
        push_echo(rc, "p.preset", rc.p.preset);
        push_echo(rc, "p.base", fmt17(rc.p.base));
        push_echo(rc, "p.amplitude", fmt17(rc.p.amplitude));
    } else {
        push_echo(rc, "p.file", rc.p.file);
    }
    push_echo(rc, "rho0.kind", rc.rho0.kind);
    if (rc.rho0.kind == "constant") {
        push_echo(rc, "rho0.constant", fmt17(rc.rho0.constant));
    } else if (rc.rho0.kind == "preset") {
        push_echo(rc, "rho0.preset", rc.rho0.preset);
        push_echo(rc, "rho0.base", fmt17(rc.rho0.base));
        push_echo(rc, "rho0.amplitude", fmt17(rc.rho0.amplitude));
    } else {
        push_echo(rc, "rho0.file", rc.rho0.file);
    }
    push_echo(rc, "u0.kind", rc.u0.kind);
    if (rc.u0.kind == "preset") {
        push_echo(rc, "u0.preset", rc.u0.preset);
        push_echo(rc, "u0.amplitude", fmt17(rc.u0.amplitude));
    } else if (rc.u0.kind == "file") {
        push_echo(rc, "u0.file", rc.u0.file);
    }
    push_echo(rc, "m0.kind", rc.m0.kind);
    if (rc.m0.kind == "file") push_echo(rc, "m0.file", rc.m0.file);
    push_echo(rc, "forcing.kind", rc.forcing.kind);
    if (rc.forcing.kind == "constant") {
        std::string vs;
        for (int a = 0; a < rc.dim; ++a)
            vs += (a ? "," : "") + fmt17(rc.forcing.value[a]);
        push_echo(rc, "forcing.value", vs);
    }
    return rc;
}

namespace {

Field read_field(const std::string& path, const PeriodicGrid& grid, int ncomp,
                 const std::string& what) {
    Snapshot snap = read_snapshot(path);
    if (!(snap.field.grid() == grid) || snap.field.ncomp() != ncomp) {
        std::ostringstream os;
        os << "config: " << what << " snapshot '" << path << "' has shape (dim "
           << snap.field.grid().dim << ", n " << snap.field.grid().n << ", components "
           << snap.field.ncomp() << "), expected (dim " << grid.dim << ", n " << grid.n
           << ", components " << ncomp << ")";
        throw InvalidInput(os.str());
    }
    return snap.field;
}

// Small band-limited random velocity: unit wavevectors only, coefficients
// uniform in [-1, 1], scaled so the field amplitude is about `amplitude`.
VectorField random_velocity(const PeriodicGrid& grid, double amplitude, std::uint64_t seed) {
    Rng rng(seed);
    VectorField u(grid, grid.dim);
    const std::size_t np = grid.num_points();
    for (int a = 0; a < grid.dim; ++a)
        for (int axis = 0; axis < grid.dim; ++axis) {
            const double ca = rng.uniform(-1.0, 1.0);
            const double cb = rng.uniform(-1.0, 1.0);
            for (std::size_t pt = 0; pt < np; ++pt) {
                const auto x = grid.point(pt);
                u.at(pt, a) += ca * std::cos(x[axis]) + cb * std::sin(x[axis]);
            }
        }
    u *= amplitude / grid.dim;
    return u;
}

} // namespace

SimConfig build_sim_config(const RunConfig& rc) {
    const PeriodicGrid grid(rc.dim, rc.n);
    SimConfig cfg(grid, rc.nmodes);
    cfg.gamma = rc.gamma;
    cfg.delta = rc.delta;
    cfg.dt = rc.dt;
    cfg.t_end = rc.t_end;
    cfg.integrator = rc.integrator;
    cfg.transport = rc.transport;
    cfg.theorem_mode = rc.theorem_mode;
    cfg.cfl_safety = rc.cfl_safety;
    cfg.blowup1_max = rc.blowup1_max;
    cfg.snapshot_cadence = rc.snapshot_cadence;
    cfg.dtilde_q = rc.dtilde_q;

    if (rc.p.kind == "constant") {
        cfg.exponent = ExponentField::constant(rc.p.constant);
    } else if (rc.p.kind == "preset") {
        cfg.exponent = ExponentField::preset(rc.p.preset, rc.p.base, rc.p.amplitude);
    } else {
        if (rc.p.file.empty()) throw InvalidInput("config: p.kind=file requires p.file");
        std::vector<Snapshot> frames;
        for (const auto& path : split(rc.p.file, ','))
            frames.push_back(read_snapshot(path));
        cfg.exponent = ExponentField::gridded(std::move(frames));
    }

    if (rc.rho0.kind == "constant") {
        cfg.rho0 = ScalarField(grid, 1, rc.rho0.constant);
    } else if (rc.rho0.kind == "preset") {
        ScalarField rho(grid, 1);
        rho.fill([&](const std::array<double, 3>& x, int) {
            return rc.rho0.base + rc.rho0.amplitude * std::sin(x[0]);
        });
        cfg.rho0 = std::move(rho);
    } else {
        if (rc.rho0.file.empty()) throw InvalidInput("config: rho0.kind=file requires rho0.file");
        cfg.rho0 = read_field(rc.rho0.file, grid, 1, "rho0");
    }

    if (rc.u0.kind == "preset") {
        if (rc.u0.preset == "sin_x") {
            VectorField u(grid, grid.dim);
            u.fill([&](const std::array<double, 3>& x, int c) {
                return c == 0 ? rc.u0.amplitude * std::sin(x[0]) : 0.0;
            });
            cfg.u0 = std::move(u);
        } else {
            cfg.u0 = random_velocity(grid, rc.u0.amplitude, rc.seed);
        }
    } else if (rc.u0.kind == "file") {
        if (rc.u0.file.empty()) throw InvalidInput("config: u0.kind=file requires u0.file");
        cfg.u0 = read_field(rc.u0.file, grid, grid.dim, "u0");
    }

    if (rc.m0.kind == "file") {
        if (rc.m0.file.empty()) throw InvalidInput("config: m0.kind=file requires m0.file");
        cfg.m0 = read_field(rc.m0.file, grid, grid.dim, "m0");
    }

    if (rc.forcing.kind == "constant") {
        const std::array<double, 3> val = rc.forcing.value;
        const int dim = rc.dim;
        cfg.forcing = [grid, val, dim](double) {
            VectorField f(grid, dim);
            const std::size_t np = grid.num_points();
            for (std::size_t pt = 0; pt < np; ++pt)
                for (int a = 0; a < dim; ++a) f.at(pt, a) = val[a];
            return f;
        };
    }
    return cfg;
}

} // namespace plns
