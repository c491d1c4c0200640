"""Near-ring products over a free group, and where right distributivity breaks."""
from directfinite import QQ, FreeAbelianGroup, FreeGroup, NearRingElem, format_value, star

G = FreeGroup(["g", "h", "s", "t"])
g, h, s, t = G.gens()


def X(e):
    return NearRingElem.X(e, QQ)


alpha = X(g) * X(h) ** 2 + 1
beta = X(s) ** 2 - X(t) ** 3
print("alpha         =", format_value(alpha))
print("beta          =", format_value(beta))
ab = star(alpha, beta)
ba = star(beta, alpha)
print(f"alpha ** beta has {len(ab.poly.terms)} monomials:")
print("   ", format_value(ab))
print(f"beta ** alpha has {len(ba.poly.terms)} monomials (the constants cancel)")

Z = FreeAbelianGroup(1)
x1 = NearRingElem.X(Z(1), QQ)
one = NearRingElem.identity(Z, QQ)
print()
print("X[1]^2 ** (2*X[0])           =", format_value(star(x1 ** 2, one + one)))
print("X[1]^2 ** X[0] + same again  =", format_value(star(x1 ** 2, one) + star(x1 ** 2, one)))
