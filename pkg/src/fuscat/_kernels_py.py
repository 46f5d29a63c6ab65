"""Pure-Python reference implementation of the hot loops (used when the compiled
extension is unavailable or ``FUSCAT_PURE=1``)."""
import numpy as np


def _outcome_lists(N):
    n = N.shape[0]
    return [[list(np.nonzero(N[a, b])[0]) for b in range(n)] for a in range(n)]


def pentagon(F, N):
    """Max pentagon residual over a dense multiplicity-free F array.

    ``F[a,b,c,d,e,f]`` is the F-symbol, ``N[a,b,c]`` the 0/1 fusion mask. Returns
    ``(residual, (a,b,c,d,e,f,g,k,l))``.
    """
    n = N.shape[0]
    out = _outcome_lists(N)
    worst = 0.0
    wit = (0,) * 9
    for a in range(n):
        for b in range(n):
            for f in out[a][b]:
                for c in range(n):
                    hs = out[b][c]
                    for g in out[f][c]:
                        for d in range(n):
                            for l in out[c][d]:
                                for k in out[b][l]:
                                    for e in out[g][d]:
                                        if not N[a, k, e] or not N[f, l, e]:
                                            continue
                                        lhs = F[f, c, d, e, g, l] * F[a, b, l, e, f, k]
                                        rhs = 0j
                                        for h in hs:
                                            rhs += F[a, b, c, g, f, h] * F[a, h, d, e, g, k] * F[b, c, d, k, h, l]
                                        r = abs(lhs - rhs)
                                        if r > worst:
                                            worst = r
                                            wit = (a, b, c, d, e, f, g, k, l)
    return float(worst), wit
