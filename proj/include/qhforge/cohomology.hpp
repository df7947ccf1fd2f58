#pragma once

#include "qhforge/curve_class.hpp"
#include "qhforge/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace qhforge {

/// Cohomology class written in the model basis; sparse, no zero entries.
struct CohClass {
    std::map<int, Rat> coeff;

    CohClass() = default;

    static CohClass basis(int i) {
        CohClass c;
        c.coeff.emplace(i, 1);
        return c;
    }

    bool is_zero() const { return coeff.empty(); }

    CohClass& operator+=(const CohClass& o);
    friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
    CohClass operator-() const;
    friend CohClass operator-(CohClass a, const CohClass& b) { return a += -b; }
    friend CohClass operator*(const Rat& c, const CohClass& a);
    bool operator==(const CohClass&) const = default;
};

std::vector<std::vector<Rat>> invert_matrix(const std::vector<std::vector<Rat>>& m);

/// Even-degree graded ring model of a target space: basis with real degrees,
/// cup structure constants, Poincare pairing, distinguished unit/point/divisor
/// classes, and the curve-class lattice with its energy and Chern weights.
/// Construction validates the ring axioms; instances are immutable.
class RingModel {
public:
    struct BasisEntry {
        std::string label;
        int degree;  // real (topological) degree, always even
    };

    struct Data {
        std::string name;
        int complex_dim = 0;
        std::vector<BasisEntry> basis;
        // cup[a][b] = product of basis classes a and b
        std::vector<std::vector<CohClass>> cup;
        std::vector<std::vector<Rat>> pairing;
        int unit_index = 0;
        int point_index = 0;
        std::vector<int> divisor_indices;
        std::vector<Rat> energy_weights;
        std::vector<long> chern_weights;
        // divisor_pairing[i][g] = pairing of degree-2 basis class i with
        // lattice generator g; rows for non-divisor indices stay empty.
        std::vector<std::vector<Rat>> divisor_pairing;
    };

    explicit RingModel(Data data);

    /// Complex projective space: basis 1, h, ..., h^n, antidiagonal pairing,
    /// rank-1 curve lattice generated by the line with first Chern number n+1.
    static RingModel projective_space(int n, const Rat& energy_weight = Rat(1));

    /// Graded tensor product of two models (all degrees even, so no signs).
    static RingModel product(const RingModel& a, const RingModel& b, std::string name = "");

    /// "P1", "P2", "P3" with unit line energy.
    static std::optional<RingModel> builtin(const std::string& name);

    const std::string& name() const { return data_.name; }
    int complex_dim() const { return data_.complex_dim; }
    int basis_size() const { return static_cast<int>(data_.basis.size()); }
    const BasisEntry& basis_entry(int i) const { return data_.basis.at(i); }
    int degree(int i) const { return data_.basis.at(i).degree; }
    int unit_index() const { return data_.unit_index; }
    int point_index() const { return data_.point_index; }
    const std::vector<int>& divisor_indices() const { return data_.divisor_indices; }
    const LatticePtr& lattice() const { return lattice_; }

    /// Homogeneous degree of c (0 for the zero class); nullopt when mixed.
    std::optional<int> degree(const CohClass& c) const;

    CohClass cup(int a, int b) const { return data_.cup.at(a).at(b); }
    CohClass cup(const CohClass& a, const CohClass& b) const;

    /// Evaluation against the fundamental class: coefficient of the point
    /// class; every lower degree integrates to 0.
    Rat integrate(const CohClass& c) const;

    const std::vector<std::vector<Rat>>& eta() const { return data_.pairing; }
    const std::vector<std::vector<Rat>>& eta_inverse() const { return eta_inverse_; }

    /// Poincare dual of the diagonal: sum eta^{ab} beta_a (x) beta_b as
    /// (a, b, coefficient) triples, zero coefficients omitted.
    std::vector<std::tuple<int, int, Rat>> diagonal_class() const;

    /// Pairing of the degree-2 basis class i with a curve class.
    Rat divisor_pairing(int i, const CurveClass& a) const;

    /// Pairing of an arbitrary degree-2 class with a curve class.
    Rat pairing_of(const CohClass& c, const CurveClass& a) const;

    int find_basis(const std::string& label) const;

    const Data& data() const { return data_; }

private:
    void validate() const;

    Data data_;
    LatticePtr lattice_;
    std::vector<std::vector<Rat>> eta_inverse_;
};

}  // namespace qhforge
