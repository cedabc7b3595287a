"""Independent symbolic oracle for the exact-algebra test values.

Run with `python3 tests/oracles/symbolic_oracle.py`; the printed values are
frozen into the C++ unit tests.
"""
import sympy as sp

x, y, z = sp.symbols("x y z")
c, d = sp.Rational(-3, 2), sp.Rational(1, 4)

sigma = [y * z, x * z, x * y]
henon = [y * z, y**2 + c * z**2 - d * x * z, z**2]
# inverse: (x', y') -> ((x'^2 + c - y')/d, x') in the z=1 chart
henon_inv = [x**2 + c * z**2 - y * z, d * x * z, d * z**2]
L = sp.Matrix([[1, 2, -1], [0, 1, 3], [2, -1, 1]])
lsigma = list(L * sp.Matrix(sigma))
Linv = L.inv()
den = sp.ilcm(*[sp.fraction(e)[1] for e in Linv])
lsigma_inv_lin = list((Linv * den) * sp.Matrix([x, y, z]))
lsigma_inv = [e.subs({x: lsigma_inv_lin[0], y: lsigma_inv_lin[1], z: lsigma_inv_lin[2]},
                     simultaneous=True) for e in sigma]


def compose(f, g):
    out = [sp.expand(e.subs({x: g[0], y: g[1], z: g[2]}, simultaneous=True)) for e in f]
    gg = sp.gcd(sp.gcd(out[0], out[1]), out[2])
    return [sp.expand(sp.cancel(e / gg)) for e in out], gg


def degree(f):
    return sp.Poly(f[0], x, y, z).total_degree()


def degrees(f, n):
    it, res = f, [degree(f)]
    for _ in range(n - 1):
        it, _ = compose(f, it)
        res.append(degree(it))
    return res


print("sigma o sigma:", compose(sigma, sigma))
hh, g = compose(henon, henon)
print("deg(h o h) =", degree(hh), "gcd", g)
print("sigma degrees N=4:", degrees(sigma, 4))
print("henon degrees N=5:", degrees(henon, 5))
print("lsigma degrees N=5:", degrees(lsigma, 5))
print("henon o henon_inv:", compose(henon, henon_inv))
print("lsigma o lsigma_inv:", compose(lsigma, lsigma_inv))
print("lsigma_inv:", [sp.expand(e) for e in lsigma_inv])


def jac(f):
    return sp.factor(sp.Matrix([[sp.diff(e, v) for v in (x, y, z)] for e in f]).det())


print("jac sigma:", jac(sigma))
print("jac henon:", jac(henon))
print("jac lsigma:", jac(lsigma))
print("jac henon_inv:", jac(henon_inv))
print("I(h):", sp.solve([e.subs(x, 1) for e in henon], [y, z], dict=True))
print("gcd(x^2-y^2, x-y):", sp.gcd(x**2 - y**2, x - y))

# Hénon fixed points in the z=1 chart and their multipliers
X = sp.symbols("X")
for r in sp.solve(X**2 - (1 + d) * X + c, X):
    J = sp.Matrix([[0, 1], [-d, 2 * r]])
    print("fixed", r, [sp.N(abs(v)) for v in J.eigenvals()])

# rank-3 lattice with an isometry of diag(1,-1,-1) having root phi^2
Q = sp.diag(1, -1, -1)
Mf = sp.Matrix([[3, 2, 2], [-2, -1, -2], [-2, -2, -1]])
print("Mf^T Q Mf == Q:", Mf.T * Q * Mf == Q)
print("charpoly:", sp.factor(Mf.charpoly().as_expr()))
print("Mfinv:", Q.inv() * Mf.T * Q)
print("rho:", sp.N(max(Mf.eigenvals(), key=lambda v: abs(sp.N(v)))), sp.N((3 + sp.sqrt(5)) / 2, 17))
Q2 = sp.diag(1, -1)
M2 = sp.Matrix([[2, 1], [1, 1]])
print("2x2 adjoint:", Q2.inv() * M2.T * Q2)

# Energies against the Euclidean form: E(u) = (1/2pi) int |grad u|^2 dV on R^4.
r, R, t = sp.symbols("r R t", positive=True)
bump = (1 - r**2 / R**2) ** 4
sphere = 2 * sp.pi**2  # area of S^3
E_bump = sp.simplify(sphere / (2 * sp.pi) * sp.integrate(sp.diff(bump, r) ** 2 * r**3, (r, 0, R)))
print("E(bump_R):", E_bump, "R=1/2:", sp.N(E_bump.subs(R, sp.Rational(1, 2)), 17))
print("E(Re z1) on a unit box:", 1 / (2 * sp.pi), sp.N(1 / (2 * sp.pi), 17))
# |u_j - u_{j+1}| for u = log r against the Euclidean form, sharp profile:
# grad is 1/r on e^{-j-1} < r < e^{-j}.
j = sp.symbols("j", positive=True)
E_shell = sp.simplify(sphere / (2 * sp.pi) * sp.integrate(r**-2 * r**3, (r, sp.exp(-j - 1), sp.exp(-j))))
print("shell energy ratio per level:", sp.simplify(E_shell.subs(j, j + 1) / E_shell), "norm ratio", sp.exp(-1))
