// Parse a polynomial, compute f_gp and the explicit bounds, then check the
// GP witness by building a binomial-squares certificate.

#include <cstdio>
#include <exception>

#include "polygp/bounds.hpp"
#include "polygp/certificates.hpp"
#include "polygp/oracle.hpp"
#include "polygp/polynomial.hpp"

int main(int argc, char** argv)
{
    using namespace polygp;
    const char* text = argc > 1 ? argv[1] : "X1^6 + X2^6 + X3^6 - 5*X1 - 4*X2 - X3 + 8";
    try {
        const SparsePolynomial f = parse_polynomial(text);
        std::printf("f      = %s\n", to_string(f).c_str());

        const BoundResult gp = compute_fgp(f);
        std::printf("f_gp   = %.6f  (%s)\n", gp.value, gp.status_detail.c_str());
        for (auto bound : {bound_rl, bound_rfk, bound_rdmt}) {
            try {
                const BoundResult r = bound(f);
                std::printf("%-6s = %.6f\n", to_string(r.method), r.value);
            } catch (const std::exception& e) {
                std::printf("explicit bound skipped: %s\n", e.what());
                break;
            }
        }
        std::printf("oracle = %.6f\n", estimate_global_min(f).value);

        if (gp.witness && !gp.is_minus_infinity()) {
            const SparsePolynomial g = f.plus_constant(-(gp.value - 1e-6));
            const SparsePolynomial form = homogenize(g);
            const SobsCertificate cert =
                suffcnd_certificate(form, homogenized_witness(g, *gp.witness), SuffCndTolerances{1e-9, 1e-9});
            double worst = 0.0;
            const SparsePolynomial diff = expand_certificate(cert) - form;
            for (const auto& [alpha, c] : diff.terms())
                worst = std::max(worst, std::fabs(c));
            std::printf("certificate: %zu binomial squares, %zu monomial squares, max error %.3g\n",
                        cert.binomials.size(), cert.squares.size(), worst);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
