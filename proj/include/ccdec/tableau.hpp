#ifndef CCDEC_TABLEAU_HPP
#define CCDEC_TABLEAU_HPP

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ccdec {

// GF(2) affine expression over measurement-outcome symbols: a parity of some
// set of random outcomes plus a constant.
struct SymBits {
    std::vector<uint64_t> syms;
    bool constant = false;

    void xor_with(const SymBits& o) {
        if (o.syms.size() > syms.size()) syms.resize(o.syms.size(), 0);
        for (size_t i = 0; i < o.syms.size(); ++i) syms[i] ^= o.syms[i];
        constant ^= o.constant;
    }
    void xor_symbol(int s) {
        size_t w = static_cast<size_t>(s) / 64;
        if (w >= syms.size()) syms.resize(w + 1, 0);
        syms[w] ^= 1ULL << (s % 64);
    }
    bool is_constant() const {
        for (uint64_t w : syms)
            if (w) return false;
        return true;
    }
    void clear() {
        syms.clear();
        constant = false;
    }
};

// Stabilizer tableau simulator that carries measurement randomness
// symbolically: each random measurement outcome becomes a fresh symbol and
// row signs are GF(2) affine expressions in those symbols. A parity of
// measurement outcomes is deterministic exactly when its symbol part cancels,
// so circuit determinism can be decided from a single run.
class SymTableau {
  public:
    explicit SymTableau(int n) : n_(n), words_((n + 63) / 64) {
        x_.assign(2 * n_, std::vector<uint64_t>(words_, 0));
        z_.assign(2 * n_, std::vector<uint64_t>(words_, 0));
        sign_.assign(2 * n_, SymBits{});
        for (int i = 0; i < n_; ++i) {
            set_bit(x_[i], i);          // destabilizer X_i
            set_bit(z_[n_ + i], i);     // stabilizer Z_i
        }
    }

    int num_qubits() const { return n_; }
    int num_symbols() const { return num_symbols_; }

    void h(int q) {
        for (int r = 0; r < 2 * n_; ++r) {
            bool xb = get_bit(x_[r], q), zb = get_bit(z_[r], q);
            if (xb && zb) sign_[r].constant ^= true;
            if (xb != zb) {
                set_bit_val(x_[r], q, zb);
                set_bit_val(z_[r], q, xb);
            }
        }
    }

    void cnot(int c, int t) {
        for (int r = 0; r < 2 * n_; ++r) {
            bool xc = get_bit(x_[r], c), zc = get_bit(z_[r], c);
            bool xt = get_bit(x_[r], t), zt = get_bit(z_[r], t);
            if (xc && zt && (xt == zc)) sign_[r].constant ^= true;
            set_bit_val(x_[r], t, xt ^ xc);
            set_bit_val(z_[r], c, zc ^ zt);
        }
    }

    SymBits measure_z(int q) {
        int p = -1;
        for (int r = n_; r < 2 * n_; ++r)
            if (get_bit(x_[r], q)) {
                p = r;
                break;
            }
        if (p >= 0) {
            // Random outcome: fresh symbol.
            // The pivot's destabilizer partner is overwritten below, so it is
            // skipped here (its product with the pivot is anti-Hermitian).
            for (int r = 0; r < 2 * n_; ++r)
                if (r != p && r != p - n_ && get_bit(x_[r], q)) rowsum(r, p);
            x_[p - n_] = x_[p];
            z_[p - n_] = z_[p];
            sign_[p - n_] = sign_[p];
            std::fill(x_[p].begin(), x_[p].end(), 0);
            std::fill(z_[p].begin(), z_[p].end(), 0);
            set_bit(z_[p], q);
            int s = num_symbols_++;
            sign_[p].clear();
            sign_[p].xor_symbol(s);
            SymBits out;
            out.xor_symbol(s);
            return out;
        }
        // Deterministic outcome: accumulate the stabilizer product that
        // equals Z_q, tracked through the destabilizer X bits.
        scratch_x_.assign(words_, 0);
        scratch_z_.assign(words_, 0);
        scratch_sign_.clear();
        for (int i = 0; i < n_; ++i)
            if (get_bit(x_[i], q)) rowsum_into_scratch(n_ + i);
        return scratch_sign_;
    }

    SymBits measure_x(int q) {
        h(q);
        SymBits out = measure_z(q);
        h(q);
        return out;
    }

    // Forced reset to |0>: measure, then apply X conditioned (symbolically)
    // on the outcome.
    void reset_z(int q) {
        SymBits m = measure_z(q);
        for (int r = 0; r < 2 * n_; ++r)
            if (get_bit(z_[r], q)) sign_[r].xor_with(m);
    }

    void reset_x(int q) {
        reset_z(q);
        h(q);
    }

  private:
    static void set_bit(std::vector<uint64_t>& v, int i) { v[i / 64] |= 1ULL << (i % 64); }
    static bool get_bit(const std::vector<uint64_t>& v, int i) {
        return (v[i / 64] >> (i % 64)) & 1;
    }
    static void set_bit_val(std::vector<uint64_t>& v, int i, bool b) {
        uint64_t m = 1ULL << (i % 64);
        v[i / 64] = b ? (v[i / 64] | m) : (v[i / 64] & ~m);
    }

    // Phase exponent (0 or 2, mod 4) of multiplying Pauli rows: source row s
    // into destination bits (xd, zd). Returns the g-sum mod 4.
    int g_sum(const std::vector<uint64_t>& xs, const std::vector<uint64_t>& zs,
              const std::vector<uint64_t>& xd, const std::vector<uint64_t>& zd) const {
        long pos = 0, neg = 0;
        for (size_t w = 0; w < static_cast<size_t>(words_); ++w) {
            uint64_t xi = xs[w], zi = zs[w], xh = xd[w], zh = zd[w];
            uint64_t p = (xi & ~zi & xh & zh) | (xi & zi & ~xh & zh) | (~xi & zi & xh & ~zh);
            uint64_t n = (xi & ~zi & ~xh & zh) | (xi & zi & xh & ~zh) | (~xi & zi & xh & zh);
            pos += __builtin_popcountll(p);
            neg += __builtin_popcountll(n);
        }
        return ((pos - neg) % 4 + 4) % 4;
    }

    // Row h *= row i (source right-multiplied in the standard convention).
    void rowsum(int h, int i) {
        int g = g_sum(x_[i], z_[i], x_[h], z_[h]);
        assert(g % 2 == 0);
        if (g == 2) sign_[h].constant ^= true;
        sign_[h].xor_with(sign_[i]);
        for (int w = 0; w < words_; ++w) {
            x_[h][w] ^= x_[i][w];
            z_[h][w] ^= z_[i][w];
        }
    }

    void rowsum_into_scratch(int i) {
        int g = g_sum(x_[i], z_[i], scratch_x_, scratch_z_);
        assert(g % 2 == 0);
        if (g == 2) scratch_sign_.constant ^= true;
        scratch_sign_.xor_with(sign_[i]);
        for (int w = 0; w < words_; ++w) {
            scratch_x_[w] ^= x_[i][w];
            scratch_z_[w] ^= z_[i][w];
        }
    }

    int n_, words_;
    int num_symbols_ = 0;
    std::vector<std::vector<uint64_t>> x_, z_;
    std::vector<SymBits> sign_;
    std::vector<uint64_t> scratch_x_, scratch_z_;
    SymBits scratch_sign_;
};

}  // namespace ccdec

#endif
