#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cistair/conformal.hpp"

namespace cistair {

template <class T>
struct Atom {
    ConformalMatrix<T> matrix;
    T weight;
};

template <class T>
struct LaminateNode {
    ConformalMatrix<T> matrix;
    T weight;          // product of split fractions along the root path
    T lambda{0};       // split fraction, internal nodes only
    int parent = -1;
    int left = -1;     // child carrying lambda
    int right = -1;    // child carrying 1 - lambda
    int atom = -1;     // leaves only; -1 once pruned
    bool leaf() const { return left < 0; }
};

struct LaminateCheck {
    bool ok = true;
    std::string message;
};

// Finitely supported probability measure with its splitting tree.
template <class T>
class Laminate {
public:
    static constexpr double kAffineTol = 1e-10;
    static constexpr double kMergeTol = 1e-12;
    static constexpr double kPruneTol = 1e-300;

    Laminate() = default;

    static Laminate dirac(const ConformalMatrix<T>& A) {
        Laminate l;
        l.nodes_.push_back({A, T(1), T(0), -1, -1, -1, 0});
        l.atoms_.push_back({A, T(1)});
        l.leaves_.push_back({0});
        return l;
    }

    const std::vector<Atom<T>>& atoms() const { return atoms_; }
    const std::vector<LaminateNode<T>>& nodes() const { return nodes_; }
    double pruned_mass() const { return pruned_mass_; }
    void set_merge(bool on) { merge_ = on; }

    // Replaces atom i = lambda B + (1 - lambda) C by the two atoms B, C.
    // Returns the atom indices now holding B and C (-1 if pruned).
    std::pair<int, int> split(std::size_t i, const ConformalMatrix<T>& B, const ConformalMatrix<T>& C,
                              const T& lambda) {
        if (i >= atoms_.size()) fail(ErrorCode::InvalidInput, "split: atom index out of range");
        check_split(atoms_[i].matrix, B, C, lambda);
        const T w = atoms_[i].weight;
        const T wB = T(lambda * w);
        const T wC = T((T(1) - lambda) * w);
        const std::vector<int> leaves = leaves_[i];
        std::vector<int> left_leaves, right_leaves;
        for (int leaf : leaves) {
            const T lw = nodes_[leaf].weight;
            nodes_[leaf].lambda = lambda;
            nodes_[leaf].atom = -1;
            const int l = static_cast<int>(nodes_.size());
            nodes_.push_back({B, T(lambda * lw), T(0), leaf, -1, -1, -1});
            nodes_.push_back({C, T((T(1) - lambda) * lw), T(0), leaf, -1, -1, -1});
            nodes_[leaf].left = l;
            nodes_[leaf].right = l + 1;
            left_leaves.push_back(l);
            right_leaves.push_back(l + 1);
        }
        // Slot i takes B; C is appended.
        atoms_[i] = {B, wB};
        leaves_[i] = left_leaves;
        for (int l : left_leaves) nodes_[l].atom = static_cast<int>(i);
        atoms_.push_back({C, wC});
        leaves_.push_back(right_leaves);
        const int ci = static_cast<int>(atoms_.size()) - 1;
        for (int l : right_leaves) nodes_[l].atom = ci;

        int bi = static_cast<int>(i), cj = ci;
        // Prune C first so B's index stays valid.
        if (prunable(wC)) {
            drop_atom(ci);
            cj = -1;
        } else if (merge_) {
            cj = merge_into_existing(ci);
        }
        if (prunable(wB)) {
            const int moved = static_cast<int>(atoms_.size()) - 1;
            drop_atom(bi);
            if (cj == moved) cj = bi;
            bi = -1;
        } else if (merge_) {
            const int last = static_cast<int>(atoms_.size()) - 1;
            const int target = merge_into_existing(bi);
            if (target != bi && cj == last) cj = bi;
            bi = target;
        }
        return {bi, cj};
    }

    // Applies a linear map preserving rank-one connections (e.g. transposition) to every matrix.
    template <class F>
    Laminate map_matrices(F f) const {
        Laminate l = *this;
        for (auto& n : l.nodes_) n.matrix = f(n.matrix);
        for (auto& a : l.atoms_) a.matrix = f(a.matrix);
        return l;
    }

    ConformalMatrix<T> barycenter() const {
        ConformalMatrix<T> s;
        for (const auto& a : atoms_) s = s + a.weight * a.matrix;
        return s;
    }

    T total_weight() const {
        T s(0);
        for (const auto& a : atoms_) s = T(s + a.weight);
        return s;
    }

    double p_moment(double p) const { return atoms_p_moment(atoms_, p); }
    double tail_mass(double t) const { return atoms_tail_mass(atoms_, t); }

    static double atoms_p_moment(const std::vector<Atom<T>>& atoms, double p) {
        if (p < 1.0) fail(ErrorCode::InvalidInput, "p_moment needs p >= 1");
        double s = 0.0;
        for (const auto& a : atoms)
            s += Scalar<T>::to_double(a.weight) * std::pow(std::sqrt(Scalar<T>::to_double(a.matrix.hs_norm2())), p);
        return s;
    }

    static double atoms_tail_mass(const std::vector<Atom<T>>& atoms, double t) {
        if (!(t > 0.0)) fail(ErrorCode::InvalidInput, "tail_mass needs t > 0");
        double s = 0.0;
        for (const auto& a : atoms)
            if (std::sqrt(Scalar<T>::to_double(a.matrix.hs_norm2())) > t) s += Scalar<T>::to_double(a.weight);
        return s;
    }

    // Re-runs every split precondition and the leaf/atom bookkeeping.
    LaminateCheck validate() const {
        LaminateCheck c;
        auto bad = [&](const std::string& m) {
            if (c.ok) c.message = m;
            c.ok = false;
        };
        if (nodes_.empty()) {
            bad("empty laminate");
            return c;
        }
        std::vector<T> from_leaves(atoms_.size(), T(0));
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& n = nodes_[i];
            if (n.leaf()) {
                if (n.atom >= 0) {
                    if (static_cast<std::size_t>(n.atom) >= atoms_.size()) {
                        bad("leaf points past atom list");
                        continue;
                    }
                    if (!close(n.matrix, atoms_[n.atom].matrix, kMergeTol)) bad("leaf matrix differs from its atom");
                    from_leaves[n.atom] = T(from_leaves[n.atom] + n.weight);
                }
                continue;
            }
            const auto& l = nodes_[n.left];
            const auto& r = nodes_[n.right];
            if (l.parent != static_cast<int>(i) || r.parent != static_cast<int>(i)) bad("broken parent links");
            try {
                check_split(n.matrix, l.matrix, r.matrix, n.lambda);
            } catch (const Error& e) {
                bad("node " + std::to_string(i) + ": " + e.what());
            }
        }
        for (std::size_t a = 0; a < atoms_.size(); ++a) {
            if (!weight_close(from_leaves[a], atoms_[a].weight)) bad("atom weight differs from its leaf weights");
        }
        const double total = Scalar<T>::to_double(total_weight()) + pruned_mass_;
        if (std::fabs(total - 1.0) > 1e-12) bad("weights do not sum to 1");
        if (!close(barycenter(), nodes_[0].matrix, kAffineTol * 10)) bad("barycenter differs from root");
        return c;
    }

    static void check_split(const ConformalMatrix<T>& A, const ConformalMatrix<T>& B, const ConformalMatrix<T>& C,
                            const T& lambda) {
        if (lambda < T(0) || lambda > T(1)) fail(ErrorCode::InvalidInput, "split fraction outside [0,1]");
        const ConformalMatrix<T> mix = lambda * B + T(T(1) - lambda) * C;
        if constexpr (Scalar<T>::exact) {
            if (mix != A) fail(ErrorCode::Invariant, "affine identity A = lambda B + (1-lambda) C violated");
        } else {
            const double scale = std::max(1.0, std::sqrt(A.hs_norm2()));
            if (std::sqrt((mix - A).hs_norm2()) > kAffineTol * scale)
                fail(ErrorCode::Invariant, "affine identity A = lambda B + (1-lambda) C violated");
        }
        if (!is_rank_one_or_zero(B - C)) fail(ErrorCode::Invariant, "split endpoints are not rank-one connected");
    }

private:
    static bool close(const ConformalMatrix<T>& a, const ConformalMatrix<T>& b, double tol) {
        if constexpr (Scalar<T>::exact) {
            return a == b;
        } else {
            const double scale = std::max(1.0, std::sqrt(std::max(a.hs_norm2(), b.hs_norm2())));
            return std::sqrt((a - b).hs_norm2()) <= tol * scale;
        }
    }
    static bool weight_close(const T& a, const T& b) {
        if constexpr (Scalar<T>::exact)
            return a == b;
        else
            return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b));
    }
    bool prunable(const T& w) const {
        if constexpr (Scalar<T>::exact)
            return w == T(0);
        else
            return w < kPruneTol;
    }
    void drop_atom(int i) {
        pruned_mass_ += Scalar<T>::to_double(atoms_[i].weight);
        for (int l : leaves_[i]) nodes_[l].atom = -1;
        const int last = static_cast<int>(atoms_.size()) - 1;
        if (i != last) {
            atoms_[i] = atoms_[last];
            leaves_[i] = leaves_[last];
            for (int l : leaves_[i]) nodes_[l].atom = i;
        }
        atoms_.pop_back();
        leaves_.pop_back();
    }
    // Merges atom i into an equal earlier/later atom; returns the surviving index.
    int merge_into_existing(int i) {
        for (int j = 0; j < static_cast<int>(atoms_.size()); ++j) {
            if (j == i || !close(atoms_[i].matrix, atoms_[j].matrix, kMergeTol)) continue;
            atoms_[j].weight = T(atoms_[j].weight + atoms_[i].weight);
            for (int l : leaves_[i]) {
                nodes_[l].atom = j;
                leaves_[j].push_back(l);
            }
            leaves_[i].clear();
            const int last = static_cast<int>(atoms_.size()) - 1;
            if (i != last) {
                atoms_[i] = atoms_[last];
                leaves_[i] = leaves_[last];
                for (int l : leaves_[i]) nodes_[l].atom = i;
                if (j == last) j = i;
            }
            atoms_.pop_back();
            leaves_.pop_back();
            return j;
        }
        return i;
    }

    std::vector<LaminateNode<T>> nodes_;
    std::vector<Atom<T>> atoms_;
    std::vector<std::vector<int>> leaves_;
    double pruned_mass_ = 0.0;
    bool merge_ = true;
};

}  // namespace cistair
