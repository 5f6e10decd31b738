"""Seeded generator of well-conditioned expression texts over the full grammar.

Every function is applied in a form that keeps it smooth and moderate on
``|t| <= 3``: logarithms and square roots get arguments bounded away from
zero, ``tan`` and ``exp`` see bounded arguments, and divisors stay >= 1.
"""
import random


def _leaf(r: random.Random) -> str:
    k = r.random()
    if k < 0.45:
        return "t"
    if k < 0.55:
        return r.choice(["pi", "e"])
    return repr(round(r.uniform(-3, 3), 3))


def gen(r: random.Random, depth: int) -> str:
    if depth <= 0:
        return _leaf(r)
    u = gen(r, depth - 1)
    v = gen(r, depth - 1)
    k = r.randrange(17)
    if k == 0:
        return f"({u} + {v})"
    if k == 1:
        return f"({u} - {v})"
    if k == 2:
        return f"({u} * {v})"
    if k == 3:
        return f"({u}) / (1 + ({v})^2)"
    if k == 4:
        return f"-({u})"
    if k == 5:
        return f"sin({u})"
    if k == 6:
        return f"cos({u})"
    if k == 7:
        return f"tan(sin({u}))"
    if k == 8:
        return f"sinh(sin({u}))"
    if k == 9:
        return f"cosh(cos({u}))"
    if k == 10:
        return f"tanh({u})"
    if k == 11:
        return f"exp(sin({u}))"
    if k == 12:
        return f"log(1 + ({u})^2)"
    if k == 13:
        return f"sqrt(2 + sin({u}))"
    if k == 14:
        return f"({u})^{r.choice([2, 3, 0, 1])}"
    if k == 15:
        return f"(1 + cos({u})^2)^{r.choice(['0.5', '-1.5', '(1/3)', '-2'])}"
    return f"abs({u}) * {_leaf(r)}"


def expressions(n: int, seed: int = 7, depth: int = 3) -> list[str]:
    r = random.Random(seed)
    return [gen(r, r.randint(1, depth)) for _ in range(n)]
