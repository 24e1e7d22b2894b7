"""Independent count of A-module structures on A(2).

Such a structure is a left A-linear retraction f: A -> A(2), f(theta) = theta.1.
f is fixed by its values on generators of A as a free left A(2)-module, and
A-linearity reduces to f(Sq^k theta) = f(Sq^k f(theta)) for k = 8, 16.  The
unknown values are Boolean variables and the conditions are polynomials in
them, evaluated on every assignment.  Nothing here touches the dual algebra.
"""
from __future__ import annotations

import numpy as np

from steenrodz.f2core import Echelon, bits
from steenrodz.steenrod.milnor import milnor_basis, milnor_degree, milnor_product

TOP = 23
BOX = (8, 4, 2)


def _pmul(p, q):
    out = set()
    for a in p:
        for b in q:
            out ^= {a | b}
    return frozenset(out)


def _padd(acc, k, p):
    c = acc.get(k, frozenset()) ^ p
    if c:
        acc[k] = c
    else:
        acc.pop(k, None)


def _evaluate(poly, n):
    idx = np.arange(n, dtype=np.int64)
    out = np.zeros(n, dtype=bool)
    for mask in poly:
        term = np.ones(n, dtype=bool)
        for i in bits(mask):
            term &= ((idx >> i) & 1).astype(bool)
        out ^= term
    return out


class RetractionOracle:
    def __init__(self):
        self.A = {d: milnor_basis(d) for d in range(TOP + 1)}
        self.aidx = {d: {r: i for i, r in enumerate(b)} for d, b in self.A.items()}
        self.A2 = {d: milnor_basis(d, BOX) for d in range(TOP + 1)}
        self.a2idx = {d: {r: i for i, r in enumerate(b)} for d, b in self.A2.items()}
        self.gens = [(0, frozenset([()]))]
        self.fgen = {0: {0: frozenset([0])}}
        self.spans = {}
        self.nvar = 0
        self.gen_degrees = []
        for d in range(1, TOP + 1):
            ech = Echelon(track=True)
            items = []
            for gi, (e, b) in enumerate(self.gens):
                for a in self.A2[d - e]:
                    terms = set()
                    for t in b:
                        terms ^= set(milnor_product(a, t))
                    r, _ = ech.add_tracked(self._vec(terms, d))
                    assert r, "A is not free over A(2)"
                    items.append((a, gi))
            for r in self.A[d]:
                if ech.reduce(1 << self.aidx[d][r]):
                    gi = len(self.gens)
                    self.gens.append((d, frozenset([r])))
                    ech.add_tracked(1 << self.aidx[d][r])
                    items.append(((), gi))
                    self.fgen[gi] = {i: frozenset([1 << (self.nvar + i)]) for i in range(len(self.A2[d]))}
                    self.nvar += len(self.A2[d])
                    self.gen_degrees.append(d)
            self.spans[d] = (ech, items)
        self._f = {}

    def _vec(self, terms, d):
        v = 0
        for t in terms:
            v ^= 1 << self.aidx[d][t]
        return v

    def f(self, r):
        if r in self._f:
            return self._f[r]
        d = milnor_degree(r)
        if d == 0:
            return {0: frozenset([0])}
        ech, items = self.spans[d]
        rem, combo = ech.decompose(1 << self.aidx[d][r])
        assert rem == 0
        out = {}
        for j in bits(combo):
            a, gi = items[j]
            e = self.gens[gi][0]
            for i, p in self.fgen[gi].items():
                for t in milnor_product(a, self.A2[e][i]):
                    _padd(out, self.a2idx[d][t], p)
        self._f[r] = out
        return out

    def f_sum(self, terms):
        out = {}
        for t in terms:
            for k, p in self.f(t).items():
                _padd(out, k, p)
        return out

    def conditions(self):
        polys = set()
        for k in (8, 16):
            for d in range(TOP + 1 - k):
                for r in self.A[d]:
                    lhs = self.f_sum(milnor_product((k,), r))
                    rhs = {}
                    for xi, p in self.f(r).items():
                        for kk, q in self.f_sum(milnor_product((k,), self.A2[d][xi])).items():
                            _padd(rhs, kk, _pmul(p, q))
                    for kk in set(lhs) | set(rhs):
                        pp = lhs.get(kk, frozenset()) ^ rhs.get(kk, frozenset())
                        if pp:
                            polys.add(pp)
        return polys

    def solutions(self) -> list[int]:
        n = 1 << self.nvar
        bad = np.zeros(n, dtype=bool)
        for p in self.conditions():
            bad |= _evaluate(p, n)
        return np.nonzero(~bad)[0].tolist()

    def action_table(self, assignment: int) -> frozenset:
        """{((source, k), target mask)} on the Milnor basis of A(2) in degree order."""
        order = [(d, r) for d in range(TOP + 1) for r in self.A2[d]]
        pos = {x: i for i, x in enumerate(order)}
        out = []
        for i, (d, r) in enumerate(order):
            for k in range(1, TOP + 1 - d):
                img = 0
                for xi, p in self.f_sum(milnor_product((k,), r)).items():
                    if sum(1 for m in p if m & assignment == m) & 1:
                        img ^= 1 << pos[(d + k, self.A2[d + k][xi])]
                if img:
                    out.append(((i, k), img))
        return frozenset(out)
