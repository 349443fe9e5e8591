"""The constructible side, decategorified.

Finite posets and the finite directed categories presented by the
chamber quiver with commuting squares, their representations with exact
rational matrices, derived homs via the nerve (bar) cochain complex,
Cartan matrices and Euler forms, the display/dimension data of the
ordered-decomposition generators over the chamber set, the iterative
cone reduction of dimension vectors, and DOT export.

A finite poset is the special case of a directed category whose hom
spaces have dimension at most one; a single nerve-complex implementation
serves both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .picsym import PicMonomial, format_monomial
from .skeleton import ChamberQuiver, chamber_quiver, enumerate_chambers
from .zlin import IntMatrix, rational_inverse, rational_rank


class ConError(ValueError):
    pass


class GenerationFailure(ConError):
    pass


# ---------------------------------------------------------------------------
# directed categories: objects + finite hom bases + composition


class FinitePoset:
    """A finite poset; also acts as a directed category with 0/1 hom spaces."""

    def __init__(self, elements, leq_pairs):
        self.elements = tuple(elements)
        pairs = set(leq_pairs)
        for x in self.elements:
            pairs.add((x, x))
        for (x, y) in pairs:
            if (y, x) in pairs and x != y:
                raise ConError(f"antisymmetry fails on {x!r}, {y!r}")
        for (x, y) in pairs:
            for (y2, z) in pairs:
                if y2 == y and (x, z) not in pairs:
                    raise ConError(f"transitivity fails through {y!r}")
        self._leq = frozenset(pairs)
        self.objects = self._linear_extension()

    @classmethod
    def from_leq(cls, elements, leq):
        elements = list(elements)
        return cls(elements, [(x, y) for x in elements for y in elements
                              if leq(x, y)])

    @classmethod
    def chain(cls, n):
        return cls(range(n), [(i, j) for i in range(n) for j in range(i, n)])

    @classmethod
    def antichain(cls, n):
        return cls(range(n), [])

    @classmethod
    def from_covers(cls, elements, covers):
        elements = list(elements)
        leq = {(x, x) for x in elements}
        adj = {x: [] for x in elements}
        for (x, y) in covers:
            adj[x].append(y)

        def reach(x):
            seen = {x}
            stack = [x]
            while stack:
                u = stack.pop()
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            return seen

        for x in elements:
            for y in reach(x):
                leq.add((x, y))
        return cls(elements, leq)

    def product(self, other):
        elems = [(a, b) for a in self.elements for b in other.elements]
        pairs = [((a, b), (c, d)) for (a, b) in elems for (c, d) in elems
                 if self.leq(a, c) and other.leq(b, d)]
        return FinitePoset(elems, pairs)

    def leq(self, x, y):
        return (x, y) in self._leq

    def _linear_extension(self):
        remaining = list(self.elements)
        out = []
        while remaining:
            minimal = [x for x in remaining
                       if not any(self.leq(y, x) for y in remaining if y != x)]
            minimal.sort(key=repr)
            out.append(minimal[0])
            remaining.remove(minimal[0])
        return tuple(out)

    def covers(self):
        out = []
        for x in self.elements:
            for y in self.elements:
                if x != y and self.leq(x, y) and not any(
                        z != x and z != y and self.leq(x, z) and self.leq(z, y)
                        for z in self.elements):
                    out.append((x, y))
        return out

    def height(self):
        best = 0
        for x in self.objects:
            best = max(best, self._height_from(x, {}))
        return best

    def _height_from(self, x, memo):
        if x in memo:
            return memo[x]
        succ = [y for y in self.elements
                if y != x and self.leq(x, y)]
        memo[x] = 0 if not succ else 1 + max(self._height_from(y, memo)
                                             for y in succ)
        return memo[x]

    # directed-category protocol -------------------------------------------
    def hom_basis(self, x, y):
        if x == y:
            return ()
        return ((x, y),) if self.leq(x, y) else ()

    def compose(self, f, g):
        # f: x -> y then g: y -> z
        return ((Fraction(1), (f[0], g[1])),)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinitePoset({len(self.elements)} elements)"


class ChamberCategory:
    """Torus-chamber category of the perturbed projective skeleton.

    One object per step class 0..n; morphisms from step s to step t < s
    are monomials of degree s - t in n + 1 wall symbols, with monomial
    multiplication as composition (all squares commute).  Its category
    of representations is the classical quiver model for the derived
    category of n-dimensional projective space.
    """

    def __init__(self, n):
        if n < 1:
            raise ConError("chamber category needs n >= 1")
        self.n = n
        self.objects = tuple(range(n + 1))  # step classes
        self._bases = {}
        for s in self.objects:
            for t in self.objects:
                if s > t:
                    self._bases[(s, t)] = tuple(
                        m for m in _monomials(n + 1, s - t))

    def hom_basis(self, s, t):
        if s == t:
            return ()
        return tuple((s, t, m) for m in self._bases.get((s, t), ()))

    def compose(self, f, g):
        (s, t, m1) = f
        (t2, u, m2) = g
        if t != t2:
            raise ConError("morphisms are not composable")
        return ((Fraction(1), (s, u, tuple(a + b for a, b in zip(m1, m2)))),)

    def arrow(self, s, symbol):
        """The degree-one basis morphism s -> s-1 for one wall symbol."""
        exps = tuple(int(i == symbol) for i in range(self.n + 1))
        return (s, s - 1, exps)

    def __repr__(self):
        return f"ChamberCategory(n={self.n})"


def _monomials(width, degree):
    if width == 1:
        yield (degree,)
        return
    for a in range(degree + 1):
        for rest in _monomials(width - 1, degree - a):
            yield (a,) + rest


# ---------------------------------------------------------------------------
# representations


def _mat(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _mat_mul(a, b):
    if not a or not b:
        inner = len(b[0]) if b else 0
        return tuple(tuple() for _ in a) if inner == 0 else tuple()
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b)))
                       for j in range(len(b[0]))) for i in range(len(a)))


def _zeros(r, c):
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


class CatRep:
    """A functor from a directed category to rational vector spaces.

    ``dims`` maps objects to dimensions and ``matrices`` maps every basis
    morphism to an exact matrix (target-dim rows by source-dim columns).
    Functoriality (hence commutativity of all squares) is validated on
    construction.
    """

    def __init__(self, category, dims, matrices, validate=True):
        self.category = category
        self.dims = {x: int(dims.get(x, 0)) for x in category.objects}
        self.matrices = {}
        for key, mat in matrices.items():
            self.matrices[key] = _mat(mat)
        for x in category.objects:
            for y in category.objects:
                for f in category.hom_basis(x, y):
                    m = self.matrices.setdefault(
                        f, _zeros(self.dims[y], self.dims[x]))
                    if (len(m), len(m[0]) if m else 0) != (self.dims[y],
                                                           self.dims[x]):
                        if self.dims[y] == 0 or self.dims[x] == 0:
                            self.matrices[f] = _zeros(self.dims[y], self.dims[x])
                        else:
                            raise ConError(f"matrix shape mismatch on {f!r}")
        if validate:
            self._validate()

    def _validate(self):
        cat = self.category
        for x in cat.objects:
            for y in cat.objects:
                for f in cat.hom_basis(x, y):
                    for z in cat.objects:
                        for g in cat.hom_basis(y, z):
                            lhs = _mat_mul(self.matrices[g], self.matrices[f])
                            rhs = _zeros(self.dims[z], self.dims[x])
                            for coeff, h in cat.compose(f, g):
                                rhs = tuple(
                                    tuple(a + coeff * b for a, b in zip(ra, rb))
                                    for ra, rb in zip(rhs, self.matrices[h]))
                            if lhs != rhs:
                                raise ConError(
                                    f"functoriality fails composing {f!r} "
                                    f"then {g!r}")

    def dim_vector(self):
        return tuple(self.dims[x] for x in self.category.objects)


def poset_rep(poset: FinitePoset, dims, cover_maps):
    """Build a poset representation from dims and per-cover matrices.

    Maps between arbitrary comparable pairs are composed along cover
    chains; commutativity of all squares is validated.
    """
    matrices = {}
    covers = poset.covers()
    table = {c: _mat(cover_maps.get(c, _zeros(dims.get(c[1], 0),
                                              dims.get(c[0], 0))))
             for c in covers}

    def map_for(x, y):
        if x == y:
            n = dims.get(x, 0)
            return tuple(tuple(Fraction(int(i == j)) for j in range(n))
                         for i in range(n))
        for (a, b) in covers:
            if a == x and poset.leq(b, y):
                return _mat_mul(map_for(b, y), table[(a, b)])
        raise ConError(f"no cover path from {x!r} to {y!r}")

    for x in poset.elements:
        for y in poset.elements:
            if x != y and poset.leq(x, y):
                matrices[(x, y)] = map_for(x, y)
    return CatRep(poset, dims, matrices)


def corepresentable(category, v) -> CatRep:
    """The corepresentable functor k hom(v, -): projective at v.

    On a poset this is the rank-one representation of the up-set of v
    with identity maps.
    """
    if v not in category.objects:
        raise ConError(f"{v!r} is not an object")
    basis = {}
    for x in category.objects:
        if x == v:
            basis[x] = ("id",)
        else:
            basis[x] = tuple(category.hom_basis(v, x))
    dims = {x: len(basis[x]) for x in category.objects}
    matrices = {}
    for x in category.objects:
        for y in category.objects:
            for g in category.hom_basis(x, y):
                rows = []
                for h in basis[y]:
                    rows.append([Fraction(0)] * dims[x])
                mat = [list(r) for r in rows]
                for col, f in enumerate(basis[x]):
                    if f == "id":
                        terms = ((Fraction(1), g),)
                    else:
                        terms = category.compose(f, g)
                    for coeff, h in terms:
                        mat[basis[y].index(h)][col] += coeff
                matrices[g] = mat
    return CatRep(category, dims, matrices)


# ---------------------------------------------------------------------------
# derived homs via the nerve (bar) cochain complex


def _chains(category, max_len=None):
    """Nondegenerate composable chains of basis morphisms, by length."""
    objs = category.objects
    arcs = {}
    for x in objs:
        arcs[x] = []
        for y in objs:
            for f in category.hom_basis(x, y):
                arcs[x].append((f, y))
    by_len = {0: [((x,), ()) for x in objs]}
    length = 0
    while True:
        nxt = []
        for (objs_c, fs) in by_len[length]:
            tail = objs_c[-1]
            for (f, y) in arcs[tail]:
                nxt.append((objs_c + (y,), fs + (f,)))
        if not nxt:
            break
        length += 1
        by_len[length] = nxt
        if max_len is not None and length >= max_len:
            break
    return by_len


def hom_complex(M: CatRep, N: CatRep):
    """The nerve cochain complex computing RHom(M, N).

    Returns (dims, differentials): the dimension of each term and the
    dense differential matrices d_p mapping term p to term p+1.
    """
    if M.category is not N.category and M.category.objects != N.category.objects:
        raise ConError("representations live on different categories")
    cat = M.category
    chains = _chains(cat)
    max_p = max(chains)

    # block layout per degree
    layouts = {}
    for p, chs in chains.items():
        offset = 0
        layout = {}
        for ch in chs:
            objs_c, _ = ch
            r = N.dims[objs_c[-1]]
            c = M.dims[objs_c[0]]
            layout[ch] = (offset, r, c)
            offset += r * c
        layouts[p] = (layout, offset)

    def idx(layout_entry, i, j):
        offset, r, c = layout_entry
        return offset + i * c + j

    diffs = {}
    for p in range(max_p):
        src_layout, src_dim = layouts[p]
        tgt_layout, tgt_dim = layouts[p + 1]
        rows = [dict() for _ in range(tgt_dim)]
        for ch, entry in tgt_layout.items():
            objs_c, fs = ch
            r_dim = N.dims[objs_c[-1]]
            c_dim = M.dims[objs_c[0]]
            # term 0: precompose with the first morphism
            sub = (objs_c[1:], fs[1:])
            if sub in src_layout:
                m0 = M.matrices[fs[0]]
                sentry = src_layout[sub]
                for i in range(r_dim):
                    for j in range(c_dim):
                        for u in range(M.dims[objs_c[1]]):
                            coeff = m0[u][j]
                            if coeff:
                                rows[idx(entry, i, j)][idx(sentry, i, u)] = \
                                    rows[idx(entry, i, j)].get(
                                        idx(sentry, i, u), Fraction(0)) + coeff
            # middle terms: compose consecutive morphisms
            for t in range(len(fs) - 1):
                sign = Fraction((-1) ** (t + 1))
                for coeff_h, h in cat.compose(fs[t], fs[t + 1]):
                    sub_objs = objs_c[:t + 1] + objs_c[t + 2:]
                    sub_fs = fs[:t] + (h,) + fs[t + 2:]
                    sub = (sub_objs, sub_fs)
                    sentry = src_layout[sub]
                    for i in range(r_dim):
                        for j in range(c_dim):
                            key = idx(sentry, i, j)
                            rows[idx(entry, i, j)][key] = rows[idx(entry, i, j)].get(
                                key, Fraction(0)) + sign * coeff_h
            # last term: postcompose with the final morphism
            sub = (objs_c[:-1], fs[:-1])
            if sub in src_layout:
                sign = Fraction((-1) ** len(fs))
                mN = N.matrices[fs[-1]]
                sentry = src_layout[sub]
                for i in range(r_dim):
                    for j in range(c_dim):
                        for v in range(N.dims[objs_c[-2]]):
                            coeff = mN[i][v]
                            if coeff:
                                key = idx(sentry, v, j)
                                rows[idx(entry, i, j)][key] = \
                                    rows[idx(entry, i, j)].get(
                                        key, Fraction(0)) + sign * coeff
        diffs[p] = (rows, src_dim, tgt_dim)

    term_dims = [layouts[p][1] for p in range(max_p + 1)]
    dense_diffs = []
    for p in range(max_p):
        rows, src_dim, tgt_dim = diffs[p]
        dense = [[Fraction(0)] * src_dim for _ in range(tgt_dim)]
        for i, row in enumerate(rows):
            for j, val in row.items():
                dense[i][j] = val
        dense_diffs.append(dense)
    return term_dims, dense_diffs


def rep_hom(M: CatRep, N: CatRep):
    """Graded dimensions of Hom and all higher Ext between two reps.

    Computed from the cochain complex whose p-th term collects, over
    nondegenerate chains of p composable basis morphisms, the maps from
    the value at the chain's source into the value at its target; exact
    because the category is directed.  Returns the list of Ext^i
    dimensions, ending at the last potentially-nonzero degree.
    """
    term_dims, dense_diffs = hom_complex(M, N)
    ranks = {}
    for p, dense in enumerate(dense_diffs):
        nonzero = dense and dense[0]
        ranks[p] = rational_rank(dense) if nonzero and term_dims[p] else 0

    out = []
    for p, dim_p in enumerate(term_dims):
        out.append(dim_p - ranks.get(p, 0) - ranks.get(p - 1, 0))
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


# ---------------------------------------------------------------------------
# Cartan matrix and Euler form


def cartan_matrix(category) -> IntMatrix:
    """Hom-space dimensions between objects, identity included."""
    objs = category.objects
    return IntMatrix([[len(category.hom_basis(x, y)) + (1 if x == y else 0)
                       for y in objs] for x in objs])


def euler_form(category, d, e) -> int:
    """The K-theoretic pairing sum_i (-1)^i dim Ext^i on dimension vectors."""
    objs = category.objects
    d = list(d)
    e = list(e)
    if len(d) != len(objs) or len(e) != len(objs):
        raise ConError("dimension vector length does not match object count")
    cinv = rational_inverse([list(r) for r in cartan_matrix(category).entries])
    total = sum(Fraction(d[i]) * cinv[i][j] * Fraction(e[j])
                for i in range(len(objs)) for j in range(len(objs)))
    if total.denominator != 1:
        raise ConError("Euler form did not evaluate to an integer")
    return int(total)


# ---------------------------------------------------------------------------
# generators of the ordered decomposition over the chamber set


@dataclass(frozen=True)
class BeilinsonGenerator:
    """Display data of the k-th decomposition generator.

    ``chamber_dims`` gives the rank of the symbolic bundle shown at each
    cube chamber; ``class_dims`` is the underlying dimension vector over
    the step classes (the objects of :class:`ChamberCategory`);
    ``decorations`` carries the explicit monomial prefix per chamber.
    """

    n: int
    k: int
    chamber_dims: dict
    decorations: dict
    class_dims: tuple

    def chamber_dim_vector(self, chambers):
        return tuple(self.chamber_dims[c] for c in chambers)


def beilinson_generators(n: int):
    """The n+1 decomposition generators over the chamber set.

    The k-th generator carries rank Sym^(k-1-step) of the rank n+1
    bundle at each chamber of step below k, zero elsewhere, with the
    monomial prefix given by the wall letters of the chamber.
    """
    chambers = enumerate_chambers(n)
    out = []
    for k in range(1, n + 2):
        dims = {}
        decs = {}
        for c in chambers:
            s = c.step
            if s >= k:
                dims[c] = 0
                decs[c] = PicMonomial.unit(n)
                continue
            dims[c] = comb(n + k - 1 - s, n)
            mono = PicMonomial.unit(n)
            for i, f in enumerate(c.flags):
                if f == "S":
                    mono = mono * PicMonomial.generator(i, n)
            decs[c] = mono
        class_dims = tuple(comb(n + k - 1 - s, n) if s < k else 0
                           for s in range(n + 1))
        out.append(BeilinsonGenerator(n=n, k=k, chamber_dims=dims,
                                      decorations=decs,
                                      class_dims=class_dims))
    return out


def beilinson_rep(n: int, k: int, category: ChamberCategory | None = None) -> CatRep:
    """The k-th generator as a representation: the projective at step k-1."""
    if category is None:
        category = ChamberCategory(n)
    if not 1 <= k <= n + 1:
        raise ConError("generator index out of range")
    return corepresentable(category, k - 1)


# ---------------------------------------------------------------------------
# iterative cone reduction of dimension vectors


@dataclass(frozen=True)
class ReductionStep:
    k: int
    coefficient: int
    remainder: tuple


def _class_vector(n, d):
    d = list(d)
    if len(d) == n + 1:
        return [int(x) for x in d]
    chambers = enumerate_chambers(n)
    if len(d) != len(chambers):
        raise ConError(
            f"dimension vector must have length {n + 1} (step classes) or "
            f"{len(chambers)} (chambers)")
    classes = [None] * (n + 1)
    for c, val in zip(chambers, d):
        s = c.step
        if classes[s] is None:
            classes[s] = int(val)
        elif classes[s] != int(val):
            raise ConError(
                "chamber dimension vector is not constant on a step class; "
                "it is not the display of any torus-level object")
    return classes


def reduce_dimension_vector(n: int, d):
    """Greedy elimination of a K-class against the generators, deepest first.

    Accepts a vector over the n+1 step classes, or a per-chamber display
    vector constant on step classes.  The generator classes form a
    unimodular triangular system (asserted), so the trace ends at zero
    after exactly n+1 steps and its coefficients reassemble the input.
    """
    gens = beilinson_generators(n)
    matrix = [list(g.class_dims) for g in gens]
    for k in range(n + 1):
        if matrix[k][k] != 1 or any(matrix[k][s] != 0 for s in range(k + 1, n + 1)):
            raise GenerationFailure(
                "generator dimension vectors are not unimodular triangular")
    current = _class_vector(n, d)
    trace = []
    for k in range(n + 1, 0, -1):
        s = k - 1
        coeff = current[s]
        current = [a - coeff * b for a, b in zip(current, matrix[k - 1])]
        trace.append(ReductionStep(k=k, coefficient=coeff,
                                   remainder=tuple(current)))
    if any(x != 0 for x in current):
        raise GenerationFailure(
            f"reduction did not reach zero within {n + 1} steps: {current}")
    return trace


# ---------------------------------------------------------------------------
# twisted representation templates and DOT export


def twisted_rep_template(n: int, pic) -> ChamberQuiver:
    """Chamber quiver with the vertex and edge monomials of a twisted object.

    For n = 2 this reproduces the standard twisted-object picture over
    the square fundamental domain (its lift convention differs from the
    label-comparison picture by one wall symbol); for other n the
    straight boundary-crossing convention is used.
    """
    pic = list(pic)
    if len(pic) != n:
        raise ConError("need one Pic generator per dimension")
    if n == 2:
        loops = [pic[0].inverse() * pic[1], pic[1]]
    else:
        loops = pic
    return chamber_quiver(n, pic, loop_monomials=loops)


def quiver_to_dot(quiver: ChamberQuiver, names=None) -> str:
    """Deterministic DOT digraph with monomial labels as attributes."""
    lines = ["digraph chambers {", "    rankdir=LR;"]
    for i, v in enumerate(quiver.vertices):
        mono = format_monomial(v.label, names)
        text = f"{v.chamber.flag_string()},{v.chamber.slant}"
        if v.translate != (0,) * quiver.n:
            text += "+"
        lines.append(
            f'    v{i} [label="{text}\\n{mono}", step={v.step}];')
    for e in quiver.edges:
        mono = format_monomial(e.label, names)
        lines.append(f'    v{e.source} -> v{e.target} [label="{mono}"];')
    lines.append("}")
    return "\n".join(lines)
