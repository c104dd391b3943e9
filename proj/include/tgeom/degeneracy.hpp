#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "tgeom/algebra.hpp"

namespace tgeom {

struct CheckResult {
    std::string name;
    double residual = 0;
    double threshold = 0;
    bool pass() const { return residual <= threshold; }
};

struct DegeneracyReport {
    std::string world;
    std::string check;  // "euclideaness" or "degeneration"
    std::vector<CheckResult> checks;
    std::string signature;                      // euclideaness: e.g. "+,-,-"
    std::string classification;                 // euclideaness: euclidean | pseudo-euclidean | not-euclidean
    std::map<std::string, std::string> verdicts;  // degeneration: kind -> degenerate | nondegenerate
    const CheckResult& get(const std::string& name) const;
    bool all_pass() const;
};

struct EuclideanBasis {
    Multivector points;
    Mat g, g_inv;
    Vec coords(const World& w, const Vec& P) const;  // x_i(P) = (P0Pi.P0P)
};
EuclideanBasis make_euclidean_basis(const World& w, const Multivector& basis);

// Conditions I-IV on the probe set; condition IV is a 64-target sampled solve.
DegeneracyReport euclideaness_check(const World& w, int n, const Multivector& basis, const Multivector& probes);

// Neutral and future/past first-order tube degeneration conditions at x.
DegeneracyReport degeneration_check(const World& w, const Vec& x, const std::vector<Vec>& probe_dirs);

nlohmann::json report_to_json(const DegeneracyReport& r);

// A(x,x') + A(x',y) + A(y,x)
double eta_triangle(const World& w, const Vec& x, const Vec& xp, const Vec& y);

// Defaults used by the command line: P0 = 0, Pi = scale e_i; seeded uniform probes in
// [-half_width, half_width]^d; coordinate axes plus the normalized diagonal. The small extents keep
// case2 worlds away from their pole at ξ² = -1/β.
Multivector default_basis(int dim, double scale = 0.5);
Multivector default_probes(int dim, int count, unsigned seed = 12345, double half_width = 0.25);
std::vector<Vec> default_probe_dirs(int dim);

}  // namespace tgeom
