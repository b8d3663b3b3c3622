#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "prgkit/common.hpp"

namespace prgkit {

// Arithmetic in GF(2^w), 1 <= w <= 64. Elements are w-bit values; the
// modulus is x^w + low_terms with low_terms chosen as the numerically
// smallest mask that makes the modulus irreducible, so a field of a given
// width is the same object in every run and every serialized descriptor.
//
// Widths up to 16 get log/antilog tables (multiplication = two lookups);
// wider fields use a 4-bit windowed shift-and-add. Instances are immutable
// after construction and safe to share across threads.
class gf2_field {
public:
    explicit gf2_field(int width) : w_(width) {
        require(width >= 1 && width <= 64, "gf2_field: width must be in [1,64]");
        mask_ = width == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
        modulus_low_ = find_irreducible_low(width);
        if (w_ <= 16) build_log_tables();
    }

    int width() const { return w_; }
    std::uint64_t order() const { return w_ == 64 ? 0 : (std::uint64_t{1} << w_); }
    std::uint64_t element_mask() const { return mask_; }
    std::uint64_t modulus_low_terms() const { return modulus_low_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a ^ b; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (w_ <= 16) {
            if (a == 0 || b == 0) return 0;
            return exp_[log_[a] + log_[b]];
        }
        return mul_windowed(a, b);
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1, base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    // Multiply by x and reduce; the basic building block.
    std::uint64_t xtimes(std::uint64_t a) const {
        bool carry = (a >> (w_ - 1)) & 1;
        a = (a << 1) & mask_;
        return carry ? a ^ modulus_low_ : a;
    }

    // True iff x^w + low is irreducible over GF(2).
    static bool is_irreducible(int w, std::uint64_t low);

private:
    std::uint64_t mul_slow(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = 0;
        while (b) {
            if (b & 1) r ^= a;
            b >>= 1;
            a = xtimes(a);
        }
        return r;
    }

    std::uint64_t mul_windowed(std::uint64_t a, std::uint64_t b) const {
        // tbl[j] = (degree<4 poly j) * a, built by doubling
        std::uint64_t tbl[16];
        tbl[0] = 0;
        tbl[1] = a;
        for (int j = 2; j < 16; j += 2) {
            tbl[j] = xtimes(tbl[j / 2]);
            tbl[j + 1] = tbl[j] ^ a;
        }
        int top = 63 - __builtin_clzll(b | 1);
        int nib = top / 4;
        std::uint64_t r = 0;
        for (int i = nib; i >= 0; --i) {
            r = xtimes(xtimes(xtimes(xtimes(r))));
            r ^= tbl[(b >> (4 * i)) & 0xf];
        }
        return r;
    }

    void build_log_tables() {
        std::uint64_t n = order() - 1;
        // factor the group order, then find a generator
        std::vector<std::uint64_t> primes;
        std::uint64_t m = n;
        for (std::uint64_t p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                primes.push_back(p);
                while (m % p == 0) m /= p;
            }
        }
        if (m > 1) primes.push_back(m);
        std::uint64_t g = 2 & mask_;
        if (w_ == 1) g = 1;
        for (;; ++g) {
            bool ok = g != 0;
            for (std::uint64_t p : primes) {
                if (pow_slow(g, n / p) == 1) { ok = false; break; }
            }
            if (ok) break;
        }
        exp_.assign(2 * n, 0);
        log_.assign(order(), 0);
        std::uint64_t v = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
            exp_[i] = exp_[i + n] = static_cast<std::uint32_t>(v);
            log_[v] = static_cast<std::uint32_t>(i);
            v = mul_slow(v, g);
        }
    }

    std::uint64_t pow_slow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1, base = a;
        while (e) {
            if (e & 1) r = mul_slow(r, base);
            base = mul_slow(base, base);
            e >>= 1;
        }
        return r;
    }

    static std::uint64_t find_irreducible_low(int w) {
        for (std::uint64_t low = 1;; low += 2) {
            if (w < 64 && low >= (std::uint64_t{1} << w)) break;
            if (is_irreducible(w, low)) return low;
        }
        throw std::logic_error("gf2_field: no irreducible modulus found");
    }

    int w_;
    std::uint64_t mask_ = 0;
    std::uint64_t modulus_low_ = 0;
    std::vector<std::uint32_t> exp_, log_;
};

namespace detail {

inline int poly_degree(std::uint64_t p) { return p == 0 ? -1 : 63 - __builtin_clzll(p); }

// a mod b over GF(2)[x], both fitting in 64 bits, b != 0.
inline std::uint64_t poly_mod64(std::uint64_t a, std::uint64_t b) {
    int db = poly_degree(b);
    for (int da = poly_degree(a); da >= db; da = poly_degree(a)) a ^= b << (da - db);
    return a;
}

inline std::uint64_t poly_gcd64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        std::uint64_t r = poly_mod64(a, b);
        a = b;
        b = r;
    }
    return a;
}

}  // namespace detail

inline bool gf2_field::is_irreducible(int w, std::uint64_t low) {
    if (w > 1 && (low & 1) == 0) return false;  // root at 0
    std::uint64_t mask = w == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w) - 1);
    auto xt = [&](std::uint64_t a) {
        bool carry = (a >> (w - 1)) & 1;
        a = (a << 1) & mask;
        return carry ? a ^ low : a;
    };
    auto mulmod = [&](std::uint64_t a, std::uint64_t b) {
        std::uint64_t r = 0;
        while (b) {
            if (b & 1) r ^= a;
            b >>= 1;
            a = xt(a);
        }
        return r;
    };
    std::uint64_t x_elem = w == 1 ? (low & 1 ? 1 : 0) : 2;  // x reduced mod f
    // Frobenius: x^(2^w) == x (mod f) is necessary
    std::uint64_t s = x_elem;
    std::vector<std::uint64_t> frob(w + 1);
    frob[0] = s;
    for (int i = 1; i <= w; ++i) {
        s = mulmod(s, s);
        frob[i] = s;
    }
    if (frob[w] != x_elem) return false;
    // and gcd(x^(2^(w/p)) - x, f) == 1 for each prime p | w rules out
    // factors of smaller degree. f has degree w (bit w may not fit in 64
    // bits), so reduce it modulo y as (x^w mod y) ^ (low mod y) first.
    auto coprime_with_f = [&](std::uint64_t y) {
        if (y == 0) return false;
        std::uint64_t r = 1;
        int dy = detail::poly_degree(y);
        for (int i = 0; i < w; ++i) {
            r <<= 1;
            if (detail::poly_degree(r) >= dy) r = detail::poly_mod64(r, y);
        }
        std::uint64_t fmody = r ^ detail::poly_mod64(low, y);
        return detail::poly_gcd64(y, fmody) == 1;
    };
    int m = w;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            if (!coprime_with_f(frob[w / p] ^ x_elem)) return false;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) {
        if (!coprime_with_f(frob[w / m] ^ x_elem)) return false;
    }
    return true;
}

// Shared per-width field instances (tables can be sizable).
inline std::shared_ptr<const gf2_field> get_gf2_field(int width) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const gf2_field>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(width);
    if (it != cache.end()) return it->second;
    auto f = std::make_shared<const gf2_field>(width);
    cache[width] = f;
    return f;
}

}  // namespace prgkit
