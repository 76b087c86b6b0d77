#ifndef HX_FFT_HPP
#define HX_FFT_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace hx {

/// Iterative radix-2 complex FFT for power-of-two lengths.
/// Forward is unnormalized (sum with e^{-i...}); inverse is unnormalized as
/// well, so a round trip scales by n and the caller divides once.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }
    void forward(std::complex<double>* data) const { run(data, false); }
    void inverse(std::complex<double>* data) const { run(data, true); }

private:
    void run(std::complex<double>* data, bool inv) const;

    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<std::complex<double>> w_; // e^{-2*pi*i*j/n}, j < n/2
};

/// Shared plan cache. Plans are immutable after construction; the cache is
/// internally synchronized, so concurrent transforms are safe and give results
/// bit-identical to serial execution.
const Fft& fft_plan(std::size_t n);

} // namespace hx

#endif
