#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plns {

// One verified inequality over a sampled batch: the empirical ratio range,
// the advertised bound it was held against, pass/fail, and the worst-margin
// sample serialized as JSON (trailing CSV column).
struct CheckRow {
    std::string name;
    int samples = 0;
    int skipped = 0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::string bound;
    bool pass = true;
    std::string worst;
};

struct CheckReport {
    std::vector<CheckRow> rows;

    bool pass() const;

    // Header plus one row per inequality; floats with 17 significant digits,
    // the worst-sample JSON quoted as the trailing column. Byte-identical
    // across runs with the same seed.
    std::string to_csv() const;
};

// Stress-law batch on random symmetric 3x3 tensors (entry scales 0.1/1/10
// cycling) and p drawn from (p_lo, p_hi]:
//   - stress(0) == 0 exactly;
//   - monotonicity and coercivity ratios >= (p-1)(1 - 1e-10);
//   - continuity and growth ratios <= 2 + 1e-10;
//   - Hessian vs central finite differences of stress, relative error <= 1e-6;
//   - Hessian contraction >= (p-1)(1+|B|^2)^{(p-2)/2}|C|^2 and operator norm
//     <= 2 (1+|B|^2)^{(p-2)/2};
//   - parameter-growth terms against their log envelope (empirical constant).
CheckReport check_potential_suite(int samples, std::uint64_t seed, double p_lo, double p_hi);

// Functional and discrete-calculus batch on random band-limited states
// (alternating 1d/2d grids, constant and space-varying exponents):
//   - quadratic-form identities between the eigenstructure and
//     assembled-tensor evaluation paths (1e-12);
//   - lower-bound ratios >= (p_minus - 1)(1 - 1e-10);
//   - pointwise derivative-norm equivalences |grad^2 u| <= 3 |grad Du| and
//     |grad Du| <= 2 |grad^2 u|;
//   - exact discrete integration by parts (1e-12);
//   - interpolation, Korn, and weighted Poincare ratios finite.
CheckReport check_inequalities_suite(int samples, std::uint64_t seed);

// Superlinear Gronwall bound: the closed-form 1/(1-t) specialization, the
// zero-data case, and RK4-integrated random instances dominated by the bound
// below its horizon (relative slack 1e-6).
CheckReport check_gronwall_suite(int samples, std::uint64_t seed);

} // namespace plns
