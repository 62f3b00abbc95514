"""Independent reference values for the C++ tests (sympy / numpy only)."""
import json
import numpy as np
import sympy as sp
from sympy.algebras.quaternion import Quaternion as Q

out = {}

# indefinite form on H^{2,1}: u = (1, j, k)
u = [Q(1, 0, 0, 0), Q(0, 0, 1, 0), Q(0, 0, 0, 1)]
sgn = [-1, -1, 1]
val = sum((s * (ui.conjugate() * ui)).a for s, ui in zip(sgn, u))
out["form_21_1jk"] = float(val)

# basis change of (1,0,0)
r2 = sp.sqrt(2)
v0, v1 = (0 + 1) / r2, (0 - 1) / r2
out["basis_change_100"] = [float(v0), float(v1), 0.0]
out["vtilde_form_100"] = float(2 * v0 * v1)

# grammian of (2i, j) and half-plane inversion
x1, x2 = np.array([2.0, 0, 0]), np.array([0, 1.0, 0])
w = np.linalg.norm(np.cross(x1, x2))
A = np.array([[x1 @ x1, x1 @ x2], [x1 @ x2, x2 @ x2]]) / w
out["gram_2i_j"] = A.tolist()
out["gram_2i_j_rho_eta"] = [1 / A[0, 0], A[0, 1] / A[0, 0]]
B = np.array([[2.0, 1.0], [1.0, 1.0]])
out["halfplane_2111"] = [1 / B[0, 0], B[0, 1] / B[0, 0]]

# Laplacian convention rho^2 (F_rr + F_ee) = 3/4 F, symbolic
rho, eta = sp.symbols("rho eta", positive=True)
a, b, c = sp.symbols("a b c", real=True)
def resid(F):
    return sp.simplify(rho**2 * (sp.diff(F, rho, 2) + sp.diff(F, eta, 2)) - sp.Rational(3, 4) * F)
mono = sp.sqrt(a**2 * rho**2 + (a * eta - b) ** 2) / sp.sqrt(rho)
dip = eta / (sp.sqrt(rho) * sp.sqrt(rho**2 + eta**2))
trip = rho ** sp.Rational(3, 2) / (rho**2 + eta**2) ** sp.Rational(3, 2)
ped = sp.sqrt(rho**2 + (eta + sp.I) ** 2) / sp.sqrt(rho)
out["laplace_symbolic_zero"] = {
    "monopole": resid(mono) == 0,
    "dipole": resid(dip) == 0,
    "tripole": resid(trip) == 0,
    "pedersen_term": sp.simplify(resid(ped)) == 0,
    "dipole_is_eta_derivative": sp.simplify(sp.diff(sp.sqrt(rho**2 + eta**2) / sp.sqrt(rho), eta) - dip) == 0,
}
out["monopole_10_at_1_0"] = float(mono.subs({a: 1, b: 0, rho: 1, eta: 0}))

# generalized Pedersen slice: Re y1 = -1/2, y2 = 0, solve f = 0 for Im y1
p, q = sp.symbols("p q", real=True)
yb, yc, yd = sp.symbols("yb yc yd", real=True)
y1 = Q(sp.Rational(-1, 2), yb, yc, yd)
I = Q(0, 1, 0, 0)
f = y1.conjugate() - y1 + p * (y1.conjugate() * I + I * y1)
sol = sp.solve([f.b, f.c, f.d], [yb, yc, yd], dict=True)[0]
out["genped_y1_at_y2_0"] = {k.name: str(v) for k, v in sol.items()}

# height-two slice, p=1, s2=1, w2=0: Re(y1) from f = 0
ya = sp.symbols("ya", real=True)
y1 = Q(ya, yb, yc, yd)
y2 = Q(1, 0, 0, 0)
pp = 1
f = I * y2 + y2.conjugate() * I + pp * (I * y1 + y1.conjugate() * I) + pp * (y2.conjugate() * I * y2)
sol = sp.solve([f.b, f.c, f.d], [ya, yc, yd], dict=True)[0]
out["height2_p1_s1_re_y1_twice"] = float(2 * sol[ya])

# weighted-circle slice |z1|^2 at p=(1,2,1), z2=0, alpha=0
p0, p1, p2 = 1, 2, 1
out["pl_121_z1sq"] = float(sp.Rational(p0, p1) / (1 - p1 * p2 * 0) - sp.Rational(p2, p1) * 0)

# f_p for p=(1,2,2), x = (1/sqrt2, 0)
x1q = Q(1 / r2, 0, 0, 0)
fp = -1 * I + 2 * (x1q.conjugate() * I * x1q)
out["fp_122_x1"] = [float(fp.a), float(fp.b), float(fp.c), float(fp.d)]

# Bryant roots for T0Diag(1,2,3)
P0, P1, P2 = 1, 2, 3
r0 = sp.Rational(P0 - P1 - P2, 2)
out["bryant_123_roots"] = sorted([float(r0), float(P0 - r0), float(-P1 - r0), float(-P2 - r0)])

# closed-form exponentials: max |A+ - A0| over t in [0,1] at gamma = 1e-3
import mpmath as mp
mp.mp.dps = 40
def Aplus(pv, lam, t):
    al, be = (pv[0] - pv[1]) / 2, (pv[0] + pv[1]) / 2
    g = mp.sqrt(abs(al**2 - lam**2))
    e = mp.exp(1j * be * t)
    return [[e * (mp.cosh(g * t) + 1j * al / g * mp.sinh(g * t)), lam / g * e * mp.sinh(g * t)],
            [lam / g * e * mp.sinh(g * t), e * (mp.cosh(g * t) - 1j * al / g * mp.sinh(g * t))]]
def A0(pv, lam, t):
    al, be = (pv[0] - pv[1]) / 2, (pv[0] + pv[1]) / 2
    e = mp.exp(1j * be * t)
    return [[e * (1 + 1j * al * t), e * lam * t], [e * lam * t, e * (1 - 1j * al * t)]]
pv = (mp.mpf(2), mp.mpf(1))
al = (pv[0] - pv[1]) / 2
lam = mp.sqrt(al**2 + mp.mpf("1e-6"))
dmax = 0
for k in range(101):
    t = mp.mpf(k) / 100
    Ap, Az = Aplus(pv, lam, t), A0(pv, lam, t)
    dmax = max(dmax, max(abs(Ap[i][j] - Az[i][j]) for i in range(2) for j in range(2)))
out["aplus_a0_gap_gamma_1e-3"] = float(dmax)

# torus moment identities on random points (numpy quaternions)
def qm(x, y):
    a1, b1, c1, d1 = x; a2, b2, c2, d2 = y
    return np.array([a1*a2-b1*b2-c1*c2-d1*d2, a1*b2+b1*a2+c1*d2-d1*c2,
                     a1*c2-b1*d2+c1*a2+d1*b2, a1*d2+b1*c2-c1*b2+d1*a2])
def cj(x): return np.array([x[0], -x[1], -x[2], -x[3]])
iq = np.array([0, 1.0, 0, 0])
rng = np.random.default_rng(7)
worst = {"diag": 0.0, "h1_as_written": 0.0, "h1_flipped": 0.0, "h2_as_written": 0.0, "h2_flipped": 0.0}
for _ in range(200):
    v = rng.normal(size=(3, 4))
    # u-basis diagonal (signature 1,2)
    y = [qm(qm(cj(v[k]), iq), v[k]) for k in range(3)]
    F = -v[0] @ v[0] + v[1] @ v[1] + v[2] @ v[2]
    worst["diag"] = max(worst["diag"], abs(-np.linalg.norm(y[0]) + np.linalg.norm(y[1]) + np.linalg.norm(y[2]) - F))
    Fv = 2 * (v[0] @ v[1]) + v[2] @ v[2]
    y0 = qm(qm(cj(v[1]), iq), v[0]) + qm(qm(cj(v[0]), iq), v[1])
    y1 = -qm(qm(cj(v[0]), iq), v[0])
    y2 = qm(qm(cj(v[2]), iq), v[2])
    for key, sg in (("h1_as_written", 1), ("h1_flipped", -1)):
        worst[key] = max(worst[key], abs(sg * (y0 @ y1) / np.linalg.norm(y1) + np.linalg.norm(y2) - Fv))
    Y0 = y0 + y2
    Y1 = qm(qm(cj(v[2]), iq), v[0]) + qm(qm(cj(v[0]), iq), v[2])
    Y2 = y1
    n1, n2 = np.linalg.norm(Y1), np.linalg.norm(Y2)
    for key, sg in (("h2_as_written", 1), ("h2_flipped", -1)):
        h2 = (n1**2 * n2**2 - (Y1 @ Y2) ** 2 + 2 * sg * (Y0 @ Y2) * n2**2) / (2 * n2**3)
        worst[key] = max(worst[key], abs(h2 - Fv) / max(1.0, abs(Fv)))
out["moment_identity_max_dev"] = worst

print(json.dumps(out, indent=1, default=str))
