"""Independent reference values frozen into the C++ tests.

Everything here is computed with mpmath closed forms or adaptive quadrature,
never with the library under test. Run: python3 compute_oracles.py
"""
import mpmath as mp

mp.mp.dps = 30


def gamma_entropy(k, theta):
    k, theta = mp.mpf(k), mp.mpf(theta)
    return k + mp.log(theta) + mp.loggamma(k) + (1 - k) * mp.digamma(k)


def normal_entropy(var):
    return mp.mpf(1) / 2 * mp.log(2 * mp.pi * mp.e * var)


def normal_renyi(var, alpha):
    # H_a = 1/2 ln(2 pi var) + ln(alpha) / (2 (alpha - 1))
    return mp.log(2 * mp.pi * var) / 2 + mp.log(alpha) / (2 * (alpha - 1))


def quad_entropy(f, a, b):
    return -mp.quad(lambda x: f(x) * mp.log(f(x)) if f(x) > 0 else 0, [a, 0.5, 1, 4, b])


out = {}
out["normal_log_density_at_0"] = -mp.log(2 * mp.pi) / 2
out["normal_entropy"] = normal_entropy(1)
out["gamma(0.5,2)_entropy"] = gamma_entropy(0.5, 2)
out["gamma(0.5,1)_entropy"] = gamma_entropy(0.5, 1)
out["gamma(1/3,3)_entropy"] = gamma_entropy(mp.mpf(1) / 3, 3)
out["gamma(1/4,4)_entropy"] = gamma_entropy(mp.mpf(1) / 4, 4)
out["gamma(2,1)_entropy (X1+X2, exp(1))"] = gamma_entropy(2, 1)
out["exp(1) G_0.5"] = mp.quad(lambda x: mp.exp(-x / 2), [0, mp.inf])
out["exp(1) H_0.5"] = mp.log(out["exp(1) G_0.5"]) / (1 - mp.mpf(0.5))
out["normal G_0.5"] = mp.quad(lambda x: (mp.npdf(x)) ** 0.5, [-mp.inf, mp.inf])
out["normal H_a(0.3)"] = normal_renyi(1, mp.mpf("0.3"))
out["N(0,2) entropy"] = normal_entropy(2)
out["N(0,2.5) entropy"] = normal_entropy(2.5)
out["N(0,4) entropy"] = normal_entropy(4)
out["cross N(0,1) vs N(0,2)"] = mp.log(2 * mp.pi * 2) / 2 + mp.mpf(1) / 4
out["cross N(0,1) vs N(0,2) by quadrature"] = -mp.quad(
    lambda x: mp.npdf(x) * mp.log(mp.npdf(x, 0, mp.sqrt(2))), [-mp.inf, mp.inf])
out["uniform stop-loss t=0.5"] = mp.quad(lambda x: x - 0.5, [0.5, 1])
out["counterexample margin n=2"] = gamma_entropy(0.5, 2) - 1
# Entropy-chain exp fixture: X = (X1+X2)/2 ~ gamma(2, 1/2); Y = X1 ~ exp(1)
fX = lambda x: 4 * x * mp.exp(-2 * x)
fY = lambda x: mp.exp(-x)
out["lemma1 exp: H(Y)"] = mp.mpf(1)
out["lemma1 exp: cross -int f log g"] = mp.quad(lambda x: fX(x) * x, [0, mp.inf])
out["lemma1 exp: H(X)"] = gamma_entropy(2, 0.5)
for a in ["0.5"]:
    a = mp.mpf(a)
    GY = mp.quad(lambda x: fY(x) ** a, [0, mp.inf])
    mid = mp.quad(lambda x: fX(x) * fY(x) ** (a - 1), [0, mp.inf]) ** a * GY ** (1 - a)
    GX = mp.quad(lambda x: fX(x) ** a, [0, mp.inf])
    out[f"lemma1 exp a={a}: G(Y), holder mid, G(X)"] = (GY, mid, GX)
# Gamma(1/2) nonnegative weights: H(w X1 + (2-w) X2) by quadrature of the density
# (convolution integral), to confirm the equal-weight maximum.
def gamma_half_pdf(x):
    return mp.exp(-x) / mp.sqrt(mp.pi * x) if x > 0 else mp.mpf(0)
for w in [mp.mpf("1.5"), mp.mpf("1.8")]:
    u, v = w, 2 - w
    def dens(s):
        if s <= 0:
            return mp.mpf(0)
        # substitute x = s*sin^2 t to remove both endpoint singularities
        g = lambda t: gamma_half_pdf(s * mp.sin(t) ** 2 / u) / u * gamma_half_pdf(s * mp.cos(t) ** 2 / v) / v * 2 * s * mp.sin(t) * mp.cos(t)
        return mp.quad(g, [0, mp.pi / 2])
    # closed form: density is exp(-s(1/u+1/v)/2)/sqrt(uv) * I0(s(1/v-1/u)/2)
    def dens_cf(s):
        return mp.exp(-s * (1 / u + 1 / v) / 2) / mp.sqrt(u * v) * mp.besseli(0, s * (1 / v - 1 / u) / 2)
    assert abs(dens(mp.mpf(1)) - dens_cf(mp.mpf(1))) < 1e-15
    out[f"gamma(1/2) H({w},{2-w})"] = -mp.quad(lambda s: dens_cf(s) * mp.log(dens_cf(s)), [0, 1, 10, mp.inf])
for k, v in out.items():
    print(f"{k}: {v}")
