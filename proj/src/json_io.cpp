#include "levypot/json_io.hpp"

#include <cmath>

namespace levypot {

namespace {

std::string join(const std::string& context, const std::string& key) {
    return context.empty() ? key : context + "." + key;
}

const Json& field(const Json& obj, const std::string& key) { return obj.at(key); }

void expect_object(const Json& j, const std::string& context) {
    if (!j.is_object()) throw InvalidArgument(context, "expected a JSON object");
}

}  // namespace

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& context) {
    expect_object(obj, context);
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw InvalidArgument(join(context, key), "unknown key");
    }
}

double get_number(const Json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = field(obj, key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw InvalidArgument(key, "expected a number");
}

double require_number(const Json& obj, const std::string& key) {
    if (!obj.contains(key)) throw InvalidArgument(key, "missing required number");
    return get_number(obj, key, 0.0);
}

int get_int(const Json& obj, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = field(obj, key);
    if (!v.is_number_integer()) throw InvalidArgument(key, "expected an integer");
    return v.get<int>();
}

bool get_bool(const Json& obj, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = field(obj, key);
    if (!v.is_boolean()) throw InvalidArgument(key, "expected true or false");
    return v.get<bool>();
}

std::string get_string(const Json& obj, const std::string& key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = field(obj, key);
    if (!v.is_string()) throw InvalidArgument(key, "expected a string");
    return v.get<std::string>();
}

Point get_point(const Json& obj, const std::string& key) {
    if (!obj.contains(key)) throw InvalidArgument(key, "missing required array");
    const Json& v = field(obj, key);
    if (!v.is_array() || v.empty()) throw InvalidArgument(key, "expected a nonempty array of numbers");
    Point p;
    for (const auto& x : v) {
        if (!x.is_number()) throw InvalidArgument(key, "expected a nonempty array of numbers");
        p.push_back(x.get<double>());
    }
    return p;
}

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

// The field names below carry the context prefix so that errors point at
// the exact location in a nested config.
#define LP_WRAP(context, expr)                                                   \
    [&]() {                                                                      \
        try {                                                                    \
            return expr;                                                         \
        } catch (const InvalidArgument& e) {                                     \
            if (e.field().rfind(context, 0) == 0) throw;                         \
            throw InvalidArgument(join(context, e.field()), e.message());         \
        }                                                                        \
    }()

LevyExponent exponent_from_json(const Json& j, const std::string& context) {
    expect_object(j, context);
    const std::string family = LP_WRAP(context, get_string(j, "family", ""));
    if (family == "stable") {
        reject_unknown_keys(j, {"family", "alpha", "scale", "dim"}, context);
        return LP_WRAP(context, isotropic_stable(get_int(j, "dim", 1), require_number(j, "alpha"),
                                                 get_number(j, "scale", 1.0)));
    }
    if (family == "brownian") {
        reject_unknown_keys(j, {"family", "diffusivity", "dim"}, context);
        return LP_WRAP(context, brownian(get_int(j, "dim", 1), get_number(j, "diffusivity", 1.0)));
    }
    if (family == "skewed") {
        reject_unknown_keys(j, {"family", "alpha", "beta", "scale"}, context);
        return LP_WRAP(context, skewed_stable(require_number(j, "alpha"), get_number(j, "beta", 0.0),
                                              get_number(j, "scale", 1.0)));
    }
    if (family == "drift") {
        reject_unknown_keys(j, {"family", "b"}, context);
        return LP_WRAP(context, pure_drift(get_point(j, "b")));
    }
    if (family == "sum") {
        reject_unknown_keys(j, {"family", "parts"}, context);
        if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
            throw InvalidArgument(join(context, "parts"), "expected a nonempty array of exponents");
        std::vector<LevyExponent> parts;
        for (std::size_t i = 0; i < j["parts"].size(); ++i)
            parts.push_back(exponent_from_json(j["parts"][i], join(context, "parts[" + std::to_string(i) + "]")));
        return LP_WRAP(context, sum_of(std::move(parts)));
    }
    throw InvalidArgument(join(context, "family"), "expected stable, brownian, skewed, drift or sum");
}

Json to_json(const LevyExponent& e) {
    return std::visit(
        [&](const auto& f) -> Json {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, IsotropicStable>)
                return {{"family", "stable"}, {"alpha", f.alpha}, {"scale", f.scale}, {"dim", e.dim()}};
            else if constexpr (std::is_same_v<F, BrownianIsotropic>)
                return {{"family", "brownian"}, {"diffusivity", f.diffusivity}, {"dim", e.dim()}};
            else if constexpr (std::is_same_v<F, Skewed1DStable>)
                return {{"family", "skewed"}, {"alpha", f.alpha}, {"beta", f.beta}, {"scale", f.scale}};
            else if constexpr (std::is_same_v<F, PureDrift>)
                return {{"family", "drift"}, {"b", f.b}};
            else {
                Json parts = Json::array();
                for (const auto& p : f.parts) parts.push_back(to_json(p));
                return {{"family", "sum"}, {"parts", parts}};
            }
        },
        e.family());
}

ExponentVector exponent_vector_from_json(const Json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) throw InvalidArgument(context, "expected a nonempty array of exponents");
    std::vector<LevyExponent> parts;
    for (std::size_t i = 0; i < j.size(); ++i)
        parts.push_back(exponent_from_json(j[i], context + "[" + std::to_string(i) + "]"));
    return LP_WRAP(context, ExponentVector(std::move(parts)));
}

Json to_json(const ExponentVector& v) {
    Json out = Json::array();
    for (const auto& c : v.components()) out.push_back(to_json(c));
    return out;
}

SetDiscretization discretization_from_json(const Json& j, const std::string& context) {
    expect_object(j, context);
    const std::string kind = LP_WRAP(context, get_string(j, "kind", ""));
    SetDiscretization out;
    if (kind == "grid") {
        reject_unknown_keys(j, {"kind", "bounds", "n"}, context);
        CubeGrid g;
        g.n_per_axis = LP_WRAP(context, get_int(j, "n", 1));
        const Json bounds = j.value("bounds", Json::array({Json::array({0.0, 1.0})}));
        if (!bounds.is_array() || bounds.empty())
            throw InvalidArgument(join(context, "bounds"), "expected [[lo, hi], ...]");
        for (const auto& b : bounds) {
            if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
                throw InvalidArgument(join(context, "bounds"), "expected [[lo, hi], ...]");
            g.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
        }
        out = g;
    } else if (kind == "cantor") {
        reject_unknown_keys(j, {"kind", "ratio", "level", "dim"}, context);
        out = CantorProduct{LP_WRAP(context, get_number(j, "ratio", 1.0 / 3.0)), LP_WRAP(context, get_int(j, "level", 0)),
                            LP_WRAP(context, get_int(j, "dim", 1))};
    } else if (kind == "two_point") {
        reject_unknown_keys(j, {"kind", "separation", "dim"}, context);
        out = TwoPoint{LP_WRAP(context, get_number(j, "separation", 1.0)), LP_WRAP(context, get_int(j, "dim", 1))};
    } else if (kind == "circle") {
        reject_unknown_keys(j, {"kind", "radius", "n"}, context);
        out = Circle{LP_WRAP(context, get_number(j, "radius", 1.0)), LP_WRAP(context, get_int(j, "n", 8))};
    } else {
        throw InvalidArgument(join(context, "kind"), "expected grid, cantor, two_point or circle");
    }
    // validation lives in discretize
    (void)LP_WRAP(context, discretize(out));
    return out;
}

Json to_json(const SetDiscretization& s) {
    return std::visit(
        [](const auto& v) -> Json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, CubeGrid>) {
                Json b = Json::array();
                for (const auto& i : v.bounds) b.push_back({i.lo, i.hi});
                return {{"kind", "grid"}, {"bounds", b}, {"n", v.n_per_axis}};
            } else if constexpr (std::is_same_v<V, CantorProduct>) {
                return {{"kind", "cantor"}, {"ratio", v.ratio}, {"level", v.level}, {"dim", v.dim}};
            } else if constexpr (std::is_same_v<V, TwoPoint>) {
                return {{"kind", "two_point"}, {"separation", v.separation}, {"dim", v.dim}};
            } else {
                return {{"kind", "circle"}, {"radius", v.radius}, {"n", v.n}};
            }
        },
        s);
}

AtomicMeasure measure_from_json(const Json& j, const std::string& context) {
    expect_object(j, context);
    const std::string kind = LP_WRAP(context, get_string(j, "kind", ""));
    if (kind == "dirac") {
        reject_unknown_keys(j, {"kind", "at"}, context);
        return LP_WRAP(context, AtomicMeasure::dirac(get_point(j, "at")));
    }
    if (kind == "atoms") {
        reject_unknown_keys(j, {"kind", "points", "weights", "cell"}, context);
        if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
            throw InvalidArgument(join(context, "points"), "expected a nonempty array of points");
        std::vector<double> coords;
        int dim = 0;
        for (const auto& p : j["points"]) {
            if (!p.is_array() || p.empty()) throw InvalidArgument(join(context, "points"), "expected arrays of numbers");
            if (dim == 0) dim = static_cast<int>(p.size());
            if (static_cast<int>(p.size()) != dim) throw InvalidArgument(join(context, "points"), "ragged points");
            for (const auto& x : p) {
                if (!x.is_number()) throw InvalidArgument(join(context, "points"), "expected arrays of numbers");
                coords.push_back(x.get<double>());
            }
        }
        std::vector<double> weights;
        if (j.contains("weights")) {
            weights = LP_WRAP(context, get_point(j, "weights"));
        } else {
            weights.assign(j["points"].size(), 1.0 / static_cast<double>(j["points"].size()));
        }
        std::optional<Point> cell;
        if (j.contains("cell")) cell = LP_WRAP(context, get_point(j, "cell"));
        return LP_WRAP(context, AtomicMeasure(dim, std::move(coords), std::move(weights), cell));
    }
    return discretize(discretization_from_json(j, context));
}

Kernel kernel_from_json(const Json& j, const std::string& context) {
    expect_object(j, context);
    const std::string kind = LP_WRAP(context, get_string(j, "kind", ""));
    if (kind == "riesz") {
        reject_unknown_keys(j, {"kind", "alpha", "dim"}, context);
        return LP_WRAP(context, riesz_kernel(get_int(j, "dim", 1), require_number(j, "alpha")));
    }
    if (kind == "gaussian") {
        reject_unknown_keys(j, {"kind", "width", "dim"}, context);
        return LP_WRAP(context, gaussian_kernel(get_int(j, "dim", 1), get_number(j, "width", 1.0)));
    }
    if (kind == "exponential") {
        reject_unknown_keys(j, {"kind", "rate"}, context);
        return LP_WRAP(context, exponential_kernel(get_number(j, "rate", 1.0)));
    }
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "value", "dim"}, context);
        return LP_WRAP(context, constant_kernel(get_int(j, "dim", 1), get_number(j, "value", 1.0)));
    }
    throw InvalidArgument(join(context, "kind"), "expected riesz, gaussian, exponential or constant");
}

QuadratureSpec quadrature_from_json(const Json& j, const std::string& context) {
    QuadratureSpec q;
    if (j.is_null()) return q;
    reject_unknown_keys(j, {"scheme", "tensor_dim", "r_max", "n_nodes", "tail_policy", "rel_tol"}, context);
    const auto scheme = LP_WRAP(context, get_string(j, "scheme", "radial"));
    if (scheme == "radial") q.scheme = QuadScheme::Radial1D;
    else if (scheme == "tensor") q.scheme = QuadScheme::Tensor;
    else if (scheme == "time_plane") q.scheme = QuadScheme::TimePlane2D;
    else throw InvalidArgument(join(context, "scheme"), "expected radial, tensor or time_plane");
    q.tensor_dim = LP_WRAP(context, get_int(j, "tensor_dim", q.tensor_dim));
    q.r_max = LP_WRAP(context, get_number(j, "r_max", q.r_max));
    q.n_nodes = LP_WRAP(context, get_int(j, "n_nodes", q.n_nodes));
    const auto tail = LP_WRAP(context, get_string(j, "tail_policy", "extrapolate"));
    if (tail == "extrapolate") q.tail_policy = TailPolicy::PowerLawExtrapolate;
    else if (tail == "truncate") q.tail_policy = TailPolicy::Truncate;
    else throw InvalidArgument(join(context, "tail_policy"), "expected extrapolate or truncate");
    q.rel_tol = LP_WRAP(context, get_number(j, "rel_tol", q.rel_tol));
    LP_WRAP(context, q.validate());
    return q;
}

Json to_json(const QuadratureSpec& q) {
    const char* scheme = q.scheme == QuadScheme::Radial1D ? "radial" : q.scheme == QuadScheme::Tensor ? "tensor" : "time_plane";
    return {{"scheme", scheme},
            {"tensor_dim", q.tensor_dim},
            {"r_max", q.r_max},
            {"n_nodes", q.n_nodes},
            {"tail_policy", q.tail_policy == TailPolicy::PowerLawExtrapolate ? "extrapolate" : "truncate"},
            {"rel_tol", q.rel_tol}};
}

ProbePlan probe_plan_from_json(const Json& j, const std::string& context) {
    ProbePlan p;
    if (j.is_null()) return p;
    reject_unknown_keys(j, {"r0", "doublings", "slope_band", "log_growth_bound", "log_slope_band"}, context);
    p.r0 = LP_WRAP(context, get_number(j, "r0", p.r0));
    p.doublings = LP_WRAP(context, get_int(j, "doublings", p.doublings));
    p.slope_band = LP_WRAP(context, get_number(j, "slope_band", p.slope_band));
    p.log_growth_bound = LP_WRAP(context, get_number(j, "log_growth_bound", p.log_growth_bound));
    p.log_slope_band = LP_WRAP(context, get_number(j, "log_slope_band", p.log_slope_band));
    return p;
}

Json to_json(const ProbePlan& p) {
    return {{"r0", p.r0},
            {"doublings", p.doublings},
            {"slope_band", p.slope_band},
            {"log_growth_bound", p.log_growth_bound},
            {"log_slope_band", p.log_slope_band}};
}

SolverOptions solver_from_json(const Json& j, const std::string& context) {
    SolverOptions s;
    if (j.is_null()) return s;
    reject_unknown_keys(j, {"tol", "max_iter", "initial", "resync_every"}, context);
    s.tol = LP_WRAP(context, get_number(j, "tol", s.tol));
    s.max_iter = LP_WRAP(context, get_int(j, "max_iter", s.max_iter));
    s.resync_every = LP_WRAP(context, get_int(j, "resync_every", s.resync_every));
    if (j.contains("initial")) s.initial = LP_WRAP(context, get_point(j, "initial"));
    if (!(s.tol > 0.0)) throw InvalidArgument(join(context, "tol"), "must be positive");
    if (s.max_iter < 1) throw InvalidArgument(join(context, "max_iter"), "must be positive");
    if (s.resync_every < 1) throw InvalidArgument(join(context, "resync_every"), "must be positive");
    return s;
}

Json to_json(const SolverOptions& s) {
    Json out{{"tol", s.tol}, {"max_iter", s.max_iter}, {"resync_every", s.resync_every}};
    if (!s.initial.empty()) out["initial"] = s.initial;
    return out;
}

MCConfig mc_config_from_json(const Json& j, const std::string& context) {
    MCConfig c;
    if (j.is_null()) return c;
    reject_unknown_keys(j, {"trials", "time_horizon", "n_steps", "epsilon", "seed", "box_scales"}, context);
    c.trials = LP_WRAP(context, get_int(j, "trials", c.trials));
    c.time_horizon = LP_WRAP(context, get_number(j, "time_horizon", c.time_horizon));
    c.n_steps = LP_WRAP(context, get_int(j, "n_steps", c.n_steps));
    c.epsilon = LP_WRAP(context, get_number(j, "epsilon", c.epsilon));
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InvalidArgument(join(context, "seed"), "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("box_scales") && !(j["box_scales"].is_array() && j["box_scales"].empty()))
        c.box_scales = LP_WRAP(context, get_point(j, "box_scales"));
    LP_WRAP(context, c.validate());
    return c;
}

Json to_json(const MCConfig& c) {
    return {{"trials", c.trials},   {"time_horizon", c.time_horizon}, {"n_steps", c.n_steps},
            {"epsilon", c.epsilon}, {"seed", c.seed},                 {"box_scales", c.box_scales}};
}

SojournConfig sojourn_config_from_json(const Json& j, const std::string& context) {
    SojournConfig c;
    if (j.is_null()) return c;
    reject_unknown_keys(j, {"trials", "time_horizon", "dt", "half_width", "strata", "seed"}, context);
    c.trials = LP_WRAP(context, get_int(j, "trials", c.trials));
    c.time_horizon = LP_WRAP(context, get_number(j, "time_horizon", c.time_horizon));
    c.dt = LP_WRAP(context, get_number(j, "dt", c.dt));
    c.half_width = LP_WRAP(context, get_number(j, "half_width", c.half_width));
    c.strata = LP_WRAP(context, get_int(j, "strata", c.strata));
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InvalidArgument(join(context, "seed"), "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    LP_WRAP(context, c.validate());
    return c;
}

Json to_json(const SojournConfig& c) {
    return {{"trials", c.trials},         {"time_horizon", c.time_horizon}, {"dt", c.dt},
            {"half_width", c.half_width}, {"strata", c.strata},             {"seed", c.seed}};
}

Json to_json(const EnergyReport& r) {
    return {{"value", number(r.value)}, {"tail_estimate", number(r.tail_estimate)}, {"converged", r.converged}};
}

Json to_json(const IdentityCheck& r) {
    return {{"real_side", number(r.real_side)},
            {"fourier_side", number(r.fourier_side)},
            {"rel_gap", number(r.rel_gap)},
            {"converged", r.converged}};
}

Json to_json(const SojournBounds& r) {
    return {{"upper", number(r.upper)},
            {"lower", number(r.lower)},
            {"lower_corrected", number(r.lower_corrected)},
            {"sector_constant", number(r.sector_constant)}};
}

Json to_json(const EquilibriumResult& r, bool with_history) {
    Json out{{"weights", r.weights},          {"energy", number(r.energy)}, {"capacity", number(r.capacity)},
             {"iterations", r.iterations},    {"fw_gap", number(r.fw_gap)}, {"converged", r.converged}};
    if (with_history) {
        Json h = Json::array();
        for (double e : r.energy_history) h.push_back(number(e));
        out["energy_history"] = h;
    }
    return out;
}

Json to_json(const FlatCheck& r) {
    return {{"equilibrium", to_json(r.result)},
            {"tv_distance", number(r.tv_distance)},
            {"cells", r.cells},
            {"flat", r.flat}};
}

Json to_json(const ConvergenceVerdict& v) {
    Json radii = Json::array(), partials = Json::array();
    for (double r : v.radii) radii.push_back(number(r));
    for (double p : v.partials) partials.push_back(number(p));
    return {{"kind", to_string(v.kind)},      {"exponent", number(v.exponent)}, {"logarithmic", v.logarithmic},
            {"radii", radii},                 {"partials", partials},           {"note", v.note}};
}

Json to_json(const PointCapacity& r) {
    Json out{{"positive", to_string(r.positive)}, {"method", r.method}};
    if (r.evidence) out["evidence"] = to_json(*r.evidence);
    return out;
}

Json to_json(const BisectionResult& b) {
    return {{"value", number(b.value)}, {"evaluations", b.evaluations}, {"inconclusive", b.inconclusive}};
}

Json to_json(const MCEstimate& e) {
    return {{"value", number(e.value)}, {"stderr", number(e.std_error)}, {"trials", e.trials}};
}

Json to_json(const LambdaRow& r) {
    return {{"re", r.z.real()},
            {"im", r.z.imag()},
            {"closed", number(r.closed)},
            {"brute", number(r.brute)},
            {"abs_diff", number(std::abs(r.closed - r.brute))},
            {"upper", number(r.upper)},
            {"sector_c", number(r.sector_c)},
            {"sector", r.sector},
            {"lower", number(r.lower)},
            {"lower_corrected", number(r.lower_corrected)}};
}

#undef LP_WRAP

}  // namespace levypot
