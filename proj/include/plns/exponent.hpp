#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "plns/field.hpp"
#include "plns/snapshot.hpp"

namespace plns {

enum class ExponentKind { constant, preset, gridded };
enum class ExponentMode { potential, theorem };

// One failing bound plus the worst sample that witnessed it.
struct ExponentViolation {
    std::string bound;  // "p- <= 1", "p- <= 7/5" or "p+ > 2"
    double worst_value = 0.0;
    double t = 0.0;
    std::array<double, 3> x{0.0, 0.0, 0.0};
};

struct ExponentReport {
    bool ok = true;
    std::vector<ExponentViolation> violations;
    std::string to_string() const;
};

// Space-time sampling resolution used to estimate extrema of non-constant
// exponents. The sample set is the simulation grid refined by `refine` per
// axis, crossed with `time_samples` uniform times in [t_begin, t_end].
struct ExponentSampling {
    PeriodicGrid grid;
    double t_begin = 0.0;
    double t_end = 0.0;
    int time_samples = 1;
    int refine = 4;
};

// The variable exponent p(t, x) with its derivatives and extrema.
// Three kinds: constant, named analytic preset, and gridded data
// (snapshot frames, multilinear in space / linear in time).
class ExponentField {
public:
    static ExponentField constant(double p);

    // Presets: "sin_x"  -> base + amp*sin(x1)
    //          "sin_xy" -> base + amp*sin(x1)*sin(x2)
    //          "sin_tx" -> base + amp*sin(x1 - t)   (traveling wave)
    static ExponentField preset(const std::string& name, double base, double amplitude);

    // Frames must share one grid (1 component) and have increasing times.
    // Evaluation clamps to the first/last frame outside the covered window.
    static ExponentField gridded(std::vector<Snapshot> frames);

    ExponentKind kind() const { return kind_; }

    double value(double t, const std::array<double, 3>& x) const;
    std::array<double, 3> grad_x(double t, const std::array<double, 3>& x) const;
    double dt(double t, const std::array<double, 3>& x) const;

    // Grid evaluations at a fixed time (stepper convenience).
    ScalarField on_grid(const PeriodicGrid& grid, double t) const;
    Field grad_on_grid(const PeriodicGrid& grid, double t) const;  // dim comps
    ScalarField dt_on_grid(const PeriodicGrid& grid, double t) const;

    // Computes and caches (p_minus, p_plus) and the Lipschitz bound.
    // Exact for constants; node-exact in value for gridded data (multilinear
    // interpolation attains its extrema at nodes and frame times); sampled
    // with the documented refinement for analytic presets.
    std::pair<double, double> extrema(const ExponentSampling& s);

    bool extrema_computed() const { return have_extrema_; }
    double p_minus() const;
    double p_plus() const;
    double lipschitz_bound() const;  // sampled sup of |grad_x p| + |dt p|

    // potential mode: 1 < p- and p+ <= 2; theorem mode: 7/5 < p- and p+ <= 2.
    // Requires extrema; the report names each failing bound and its worst
    // sample point.
    ExponentReport validate(ExponentMode mode) const;

private:
    ExponentField() = default;

    enum class Preset { sin_x, sin_xy, sin_tx };

    double frame_value(std::size_t frame, const std::array<double, 3>& x) const;
    std::array<double, 3> frame_grad(std::size_t frame, const std::array<double, 3>& x) const;

    ExponentKind kind_ = ExponentKind::constant;
    double constant_ = 0.0;
    Preset preset_ = Preset::sin_x;
    double base_ = 0.0;
    double amplitude_ = 0.0;
    std::vector<Snapshot> frames_;

    bool have_extrema_ = false;
    double p_minus_ = 0.0, p_plus_ = 0.0;
    double lipschitz_ = 0.0;
    double argmin_t_ = 0.0, argmax_t_ = 0.0;
    std::array<double, 3> argmin_x_{0, 0, 0}, argmax_x_{0, 0, 0};
};

} // namespace plns
