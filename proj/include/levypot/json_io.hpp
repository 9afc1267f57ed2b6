#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "levypot/classify.hpp"
#include "levypot/energy.hpp"
#include "levypot/equilibrium.hpp"
#include "levypot/exponents.hpp"
#include "levypot/kernels.hpp"
#include "levypot/measures.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/simulate.hpp"

namespace levypot {

using Json = nlohmann::json;

// Throws InvalidArgument naming `context.key` for the first key of `obj`
// outside `allowed`, or when `obj` is not an object.
void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& context);

// Typed field access with defaults; errors name the field.
[[nodiscard]] double get_number(const Json& obj, const std::string& key, double fallback);
[[nodiscard]] double require_number(const Json& obj, const std::string& key);
[[nodiscard]] int get_int(const Json& obj, const std::string& key, int fallback);
[[nodiscard]] bool get_bool(const Json& obj, const std::string& key, bool fallback);
[[nodiscard]] std::string get_string(const Json& obj, const std::string& key, const std::string& fallback);
[[nodiscard]] Point get_point(const Json& obj, const std::string& key);

// Non-finite doubles become the strings "inf", "-inf", "nan".
[[nodiscard]] Json number(double x);

// {"family": "stable", "alpha", "scale", "dim"} | {"family": "brownian",
// "diffusivity", "dim"} | {"family": "skewed", "alpha", "beta", "scale"} |
// {"family": "drift", "b"} | {"family": "sum", "parts"}.
[[nodiscard]] LevyExponent exponent_from_json(const Json& j, const std::string& context = "exponent");
[[nodiscard]] Json to_json(const LevyExponent& e);
// An array of exponents.
[[nodiscard]] ExponentVector exponent_vector_from_json(const Json& j, const std::string& context = "exponents");
[[nodiscard]] Json to_json(const ExponentVector& v);

// {"kind": "grid", "bounds": [[lo, hi], ...], "n"} | {"kind": "cantor",
// "ratio", "level", "dim"} | {"kind": "two_point", "separation", "dim"} |
// {"kind": "circle", "radius", "n"}.
[[nodiscard]] SetDiscretization discretization_from_json(const Json& j, const std::string& context = "set");
[[nodiscard]] Json to_json(const SetDiscretization& s);
// A discretization, {"kind": "dirac", "at"} or {"kind": "atoms", "points",
// "weights", "cell"}.
[[nodiscard]] AtomicMeasure measure_from_json(const Json& j, const std::string& context = "measure");

// {"kind": "riesz", "alpha", "dim"} | {"kind": "gaussian", "width", "dim"} |
// {"kind": "exponential", "rate"} | {"kind": "constant", "value", "dim"}.
[[nodiscard]] Kernel kernel_from_json(const Json& j, const std::string& context = "kernel");

[[nodiscard]] QuadratureSpec quadrature_from_json(const Json& j, const std::string& context = "quad");
[[nodiscard]] Json to_json(const QuadratureSpec& q);
[[nodiscard]] ProbePlan probe_plan_from_json(const Json& j, const std::string& context = "probe");
[[nodiscard]] Json to_json(const ProbePlan& p);
[[nodiscard]] SolverOptions solver_from_json(const Json& j, const std::string& context = "solver");
[[nodiscard]] Json to_json(const SolverOptions& s);
[[nodiscard]] MCConfig mc_config_from_json(const Json& j, const std::string& context = "mc");
[[nodiscard]] Json to_json(const MCConfig& c);
[[nodiscard]] SojournConfig sojourn_config_from_json(const Json& j, const std::string& context = "sojourn");
[[nodiscard]] Json to_json(const SojournConfig& c);

[[nodiscard]] Json to_json(const EnergyReport& r);
[[nodiscard]] Json to_json(const IdentityCheck& r);
[[nodiscard]] Json to_json(const SojournBounds& r);
[[nodiscard]] Json to_json(const EquilibriumResult& r, bool with_history = false);
[[nodiscard]] Json to_json(const FlatCheck& r);
[[nodiscard]] Json to_json(const PointCapacity& r);
[[nodiscard]] Json to_json(const ConvergenceVerdict& v);
[[nodiscard]] Json to_json(const BisectionResult& b);
[[nodiscard]] Json to_json(const MCEstimate& e);
[[nodiscard]] Json to_json(const LambdaRow& r);

}  // namespace levypot
