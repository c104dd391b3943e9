#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "tgeom/types.hpp"

namespace tgeom {

enum class WorldKind { euclidean, constant_a, case1, case2, cubic_a };

std::string to_string(WorldKind k);
WorldKind world_kind_from_string(const std::string& s);

struct WorldSpec {
    WorldKind kind = WorldKind::euclidean;
    int dim = 0;
    Mat metric;                   // full symmetric d x d
    Vec b;                        // constant_a: a_i; case1/case2: b_i
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> a3;       // d^3, row-major, fully symmetric (cubic_a)

    // Throws InputError when the invariants of the kind are not met.
    void validate() const;

    static Mat diag_metric(const std::vector<double>& signs);
};

// 2Σ as a signed square. rho() is only defined when the square is nonnegative.
struct SignedSquare {
    double square = 0.0;
    bool real() const { return square >= 0.0; }
    double rho() const;
};

class World {
public:
    using Fn = std::function<double(const Vec&, const Vec&)>;

    // Wraps an arbitrary evaluator. The caller promises Σ(x,x) = 0 and smoothness.
    // `metric` is the constant metric used as a fallback scale by some checks; pass an
    // empty matrix when there is none.
    World(int dim, Fn sigma, std::string name, Mat metric = Mat());

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const std::optional<WorldSpec>& spec() const { return spec_; }
    const Mat& metric() const { return metric_; }

    double sigma(const Vec& x, const Vec& xp) const;
    double G(const Vec& x, const Vec& xp) const;
    double A(const Vec& x, const Vec& xp) const;
    std::pair<double, double> decompose(const Vec& x, const Vec& xp) const;
    SignedSquare rho(const Vec& x, const Vec& xp) const;

    // Same world with Σ replaced by f(Σ).
    World compose(const std::function<double(double)>& f, const std::string& tag) const;

    void check_point(const Vec& x) const;

private:
    friend World make_world(const WorldSpec& spec);
    int dim_;
    std::shared_ptr<const Fn> fn_;
    std::string name_;
    Mat metric_;
    std::optional<WorldSpec> spec_;
};

World make_world(const WorldSpec& spec);
double eval_sigma(const World& w, const Vec& x, const Vec& xp);
std::pair<double, double> decompose(const World& w, const Vec& x, const Vec& xp);

}  // namespace tgeom
