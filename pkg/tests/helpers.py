import random

from supersplit.sheaf import random_laurent
from supersplit.superring import SuperPoly
from supersplit.supermodule import FreeSupermodule, SuperMatrix


def random_module(rng: random.Random, max_even=3, max_odd=3, twists=(0,)) -> FreeSupermodule:
    while True:
        p, q = rng.randint(0, max_even), rng.randint(0, max_odd)
        if p + q:
            return FreeSupermodule(tuple(rng.choice(twists) for _ in range(p)),
                                   tuple(rng.choice(twists) for _ in range(q)))


def random_even_matrix(rng: random.Random, module: FreeSupermodule, nx: int, m: int, chart=0,
                       max_pole=1, singular=False) -> SuperMatrix:
    """Even endomorphism with entries regular on D(x_chart).

    With ``singular`` one reduced row of a diagonal block is copied onto
    another, so the reduction is not invertible.
    """
    tw, par = module.twists, module.parities
    rows = []
    for r in range(module.size):
        row = []
        for c in range(module.size):
            deg, pty = tw[r] - tw[c], (par[r] + par[c]) % 2
            f = random_laurent(rng, nx, chart, deg, pty, m, max_pole=max_pole, min_odd=1)
            if pty == 0:
                f = f + random_laurent(rng, nx, chart, deg, 0, 0, max_pole=max_pole, nterms=1)
                if r == c:
                    f = f + SuperPoly.const(rng.choice([1, 2, -1, 3]), nx)
            row.append(f)
        rows.append(row)
    if singular:
        block = [i for i in range(module.size) if par[i] == par[0]]
        if len(block) >= 2:
            a, b = rng.sample(block, 2)
            for c in range(module.size):
                if par[c] == par[a]:
                    rows[b][c] = rows[a][c]
        else:
            for c in range(module.size):
                if par[c] == par[0]:
                    rows[0][c] = SuperPoly.zero()
    return SuperMatrix(module, module, rows, nx)
