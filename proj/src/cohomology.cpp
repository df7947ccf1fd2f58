#include "qhforge/cohomology.hpp"

#include "qhforge/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace qhforge {

CohClass& CohClass::operator+=(const CohClass& o) {
    for (const auto& [i, c] : o.coeff) {
        auto [it, inserted] = coeff.emplace(i, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) coeff.erase(it);
        }
    }
    return *this;
}

CohClass CohClass::operator-() const {
    CohClass out;
    for (const auto& [i, c] : coeff) out.coeff.emplace(i, -c);
    return out;
}

CohClass operator*(const Rat& c, const CohClass& a) {
    CohClass out;
    if (c == 0) return out;
    for (const auto& [i, v] : a.coeff) out.coeff.emplace(i, c * v);
    return out;
}

std::vector<std::vector<Rat>> invert_matrix(const std::vector<std::vector<Rat>>& m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("matrix not square");
    std::vector<std::vector<Rat>> a = m;
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw DegeneratePairing("degenerate pairing");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        Rat p = a[col][col];
        for (size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            Rat f = a[row][col];
            for (size_t j = 0; j < n; ++j) {
                a[row][j] -= f * a[col][j];
                inv[row][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

RingModel::RingModel(Data data) : data_(std::move(data)) {
    lattice_ = make_lattice(data_.energy_weights, data_.chern_weights);
    validate();
    eta_inverse_ = invert_matrix(data_.pairing);
}

void RingModel::validate() const {
    const int nb = basis_size();
    if (nb == 0) throw std::invalid_argument("empty basis");
    for (const auto& b : data_.basis)
        if (b.degree < 0 || b.degree % 2 != 0)
            throw std::invalid_argument("basis degrees must be even and nonnegative");
    if (static_cast<int>(data_.cup.size()) != nb || static_cast<int>(data_.pairing.size()) != nb)
        throw std::invalid_argument("cup/pairing tables sized inconsistently with basis");
    if (degree(data_.unit_index) != 0) throw std::invalid_argument("unit class must have degree 0");
    if (degree(data_.point_index) != 2 * data_.complex_dim)
        throw std::invalid_argument("point class must have top degree");

    // Pairing block structure and symmetry.
    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) {
            if (data_.pairing[a][b] != data_.pairing[b][a])
                throw std::invalid_argument("pairing not symmetric");
            if (data_.pairing[a][b] != 0 && degree(a) + degree(b) != 2 * data_.complex_dim)
                throw std::invalid_argument("pairing nonzero off complementary degrees");
        }

    // Unit, grading and commutativity of the cup table.
    for (int a = 0; a < nb; ++a) {
        if (!(cup(data_.unit_index, a) == CohClass::basis(a)))
            throw std::invalid_argument("unit law fails in cup table");
        for (int b = 0; b < nb; ++b) {
            if (!(cup(a, b) == cup(b, a))) throw std::invalid_argument("cup table not commutative");
            auto d = degree(cup(a, b));
            if (d && !cup(a, b).is_zero() && *d != degree(a) + degree(b))
                throw std::invalid_argument("cup table violates the grading");
            if (!d) throw std::invalid_argument("cup of basis classes not homogeneous");
        }
    }

    // Associativity on basis triples.
    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b)
            for (int c = 0; c < nb; ++c)
                if (!(cup(cup(a, b), CohClass::basis(c)) == cup(CohClass::basis(a), cup(b, c))))
                    throw std::invalid_argument("cup table not associative");

    for (int i : data_.divisor_indices) {
        if (degree(i) != 2) throw std::invalid_argument("divisor index with degree != 2");
        if (data_.divisor_pairing.at(i).size() != data_.energy_weights.size())
            throw std::invalid_argument("divisor pairing row sized inconsistently with lattice");
    }
}

std::optional<int> RingModel::degree(const CohClass& c) const {
    std::optional<int> deg;
    for (const auto& [i, v] : c.coeff) {
        int d = degree(i);
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg ? deg : std::optional<int>(0);
}

CohClass RingModel::cup(const CohClass& a, const CohClass& b) const {
    CohClass out;
    for (const auto& [i, ci] : a.coeff)
        for (const auto& [j, cj] : b.coeff) out += (ci * cj) * cup(i, j);
    return out;
}

Rat RingModel::integrate(const CohClass& c) const {
    auto it = c.coeff.find(data_.point_index);
    return it == c.coeff.end() ? Rat(0) : it->second;
}

std::vector<std::tuple<int, int, Rat>> RingModel::diagonal_class() const {
    std::vector<std::tuple<int, int, Rat>> out;
    const int nb = basis_size();
    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b)
            if (eta_inverse_[a][b] != 0) out.emplace_back(a, b, eta_inverse_[a][b]);
    return out;
}

Rat RingModel::divisor_pairing(int i, const CurveClass& a) const {
    if (std::find(data_.divisor_indices.begin(), data_.divisor_indices.end(), i) ==
        data_.divisor_indices.end())
        throw std::invalid_argument("basis class " + std::to_string(i) + " is not a divisor");
    if (a.rank() != lattice_->rank()) throw LatticeMismatch("class rank does not match lattice");
    Rat r = 0;
    for (int g = 0; g < a.rank(); ++g) r += data_.divisor_pairing[i][g] * a.coords[g];
    return r;
}

Rat RingModel::pairing_of(const CohClass& c, const CurveClass& a) const {
    Rat r = 0;
    for (const auto& [i, v] : c.coeff) {
        if (degree(i) != 2) throw std::invalid_argument("pairing_of needs a degree-2 class");
        r += v * divisor_pairing(i, a);
    }
    return r;
}

int RingModel::find_basis(const std::string& label) const {
    for (int i = 0; i < basis_size(); ++i)
        if (data_.basis[i].label == label) return i;
    throw std::invalid_argument("no basis class labelled '" + label + "' in " + data_.name);
}

RingModel RingModel::projective_space(int n, const Rat& energy_weight) {
    if (n < 1) throw std::invalid_argument("projective space needs n >= 1");
    Data d;
    d.name = "P" + std::to_string(n);
    d.complex_dim = n;
    for (int i = 0; i <= n; ++i) {
        std::string label = i == 0 ? "1" : (i == 1 ? "h" : "h^" + std::to_string(i));
        d.basis.push_back({label, 2 * i});
    }
    d.cup.assign(n + 1, std::vector<CohClass>(n + 1));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            d.cup[i][j] = (i + j <= n) ? CohClass::basis(i + j) : CohClass();
    d.pairing.assign(n + 1, std::vector<Rat>(n + 1, Rat(0)));
    for (int i = 0; i <= n; ++i) d.pairing[i][n - i] = 1;
    d.unit_index = 0;
    d.point_index = n;
    d.divisor_indices = {1};
    d.energy_weights = {energy_weight};
    d.chern_weights = {n + 1};
    d.divisor_pairing.assign(n + 1, {});
    d.divisor_pairing[1] = {Rat(1)};
    return RingModel(std::move(d));
}

RingModel RingModel::product(const RingModel& a, const RingModel& b, std::string name) {
    Data d;
    d.name = name.empty() ? a.name() + "x" + b.name() : std::move(name);
    d.complex_dim = a.complex_dim() + b.complex_dim();
    const int na = a.basis_size(), nb = b.basis_size();
    auto idx = [nb](int i, int j) { return i * nb + j; };
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            d.basis.push_back({a.basis_entry(i).label + "*" + b.basis_entry(j).label,
                               a.degree(i) + b.degree(j)});
    d.cup.assign(na * nb, std::vector<CohClass>(na * nb));
    for (int i1 = 0; i1 < na; ++i1)
        for (int j1 = 0; j1 < nb; ++j1)
            for (int i2 = 0; i2 < na; ++i2)
                for (int j2 = 0; j2 < nb; ++j2) {
                    CohClass out;
                    for (const auto& [ia, ca] : a.cup(i1, i2).coeff)
                        for (const auto& [jb, cb] : b.cup(j1, j2).coeff)
                            out += (ca * cb) * CohClass::basis(idx(ia, jb));
                    d.cup[idx(i1, j1)][idx(i2, j2)] = out;
                }
    d.pairing.assign(na * nb, std::vector<Rat>(na * nb, Rat(0)));
    for (int i1 = 0; i1 < na; ++i1)
        for (int j1 = 0; j1 < nb; ++j1)
            for (int i2 = 0; i2 < na; ++i2)
                for (int j2 = 0; j2 < nb; ++j2)
                    d.pairing[idx(i1, j1)][idx(i2, j2)] =
                        a.eta()[i1][i2] * b.eta()[j1][j2];
    d.unit_index = idx(a.unit_index(), b.unit_index());
    d.point_index = idx(a.point_index(), b.point_index());
    const int ra = a.lattice()->rank(), rb = b.lattice()->rank();
    for (const Rat& w : a.lattice()->energy_weights()) d.energy_weights.push_back(w);
    for (const Rat& w : b.lattice()->energy_weights()) d.energy_weights.push_back(w);
    for (long c : a.lattice()->chern_weights()) d.chern_weights.push_back(c);
    for (long c : b.lattice()->chern_weights()) d.chern_weights.push_back(c);
    d.divisor_pairing.assign(na * nb, {});
    for (int i : a.divisor_indices()) {
        int k = idx(i, b.unit_index());
        d.divisor_indices.push_back(k);
        std::vector<Rat> row(ra + rb, Rat(0));
        for (int g = 0; g < ra; ++g) row[g] = a.data().divisor_pairing[i][g];
        d.divisor_pairing[k] = std::move(row);
    }
    for (int j : b.divisor_indices()) {
        int k = idx(a.unit_index(), j);
        d.divisor_indices.push_back(k);
        std::vector<Rat> row(ra + rb, Rat(0));
        for (int g = 0; g < rb; ++g) row[ra + g] = b.data().divisor_pairing[j][g];
        d.divisor_pairing[k] = std::move(row);
    }
    std::sort(d.divisor_indices.begin(), d.divisor_indices.end());
    return RingModel(std::move(d));
}

std::optional<RingModel> RingModel::builtin(const std::string& name) {
    if (name == "P1") return projective_space(1);
    if (name == "P2") return projective_space(2);
    if (name == "P3") return projective_space(3);
    return std::nullopt;
}

}  // namespace qhforge
