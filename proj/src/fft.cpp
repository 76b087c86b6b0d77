#include "hx/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hx {

static bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw std::invalid_argument("Fft: length must be a power of two");
    rev_.resize(n);
    std::size_t lg = 0;
    while ((std::size_t{1} << lg) < n) ++lg;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < lg; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (lg - 1 - b);
        rev_[i] = r;
    }
    w_.resize(n / 2);
    const double base = -2.0 * M_PI / (double)n;
    for (std::size_t j = 0; j < n / 2; ++j) w_[j] = {std::cos(base * (double)j), std::sin(base * (double)j)};
}

void Fft::run(std::complex<double>* a, bool inv) const {
    const std::size_t n = n_;
    if (n == 1) return;
    for (std::size_t i = 0; i < n; ++i)
        if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        const std::size_t half = len >> 1;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t j = 0; j < half; ++j) {
                std::complex<double> w = w_[j * stride];
                if (inv) w = std::conj(w);
                const std::complex<double> u = a[base + j];
                const std::complex<double> v = a[base + j + half] * w;
                a[base + j] = u + v;
                a[base + j + half] = u - v;
            }
        }
    }
}

const Fft& fft_plan(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, std::unique_ptr<Fft>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Fft>(n);
    return *slot;
}

} // namespace hx
