"""Fixed-locus classes and their invariance under blowup surgery.

A fixed-locus description is a list of components, each recorded by the
unordered tuple of characters acting on the tangent space at one of its
points (the number of zero entries is the component's dimension).  The
class of the description is the sum of the corresponding "B" symbols.

A blowup center is described by local data: dimensions d1..d4 with
d1 + d2 + d3 + d4 = n, nonzero characters b_1..b_{d3}, and distinct
nonzero characters a^1..a^m with multiplicities kappa_i summing to d4.
Three cases occur:

- case I   (d1 = 0, d4 >= 2): the center swallows a fixed component;
  the old symbol is removed and m new component symbols appear,
- case II  (d1, d4 >= 1): the old component survives and m new
  component symbols appear; their sum is a relation consequence,
- case III (d1 >= 2, d3 >= 1, d4 = 0): nothing changes.

`blowup_delta` returns the added-minus-removed contribution near the
center; `certify_invariance` checks that it lies in the relation row
span, which is the executable content of blowup invariance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groups import _as_index, canonicalize, spans
from .linalg import ModpRowSpan, PrimeSource, integer_row_span
from .relations import SymbolVector


@dataclass
class FixedLocusData:
    """Components of a fixed locus: (optional label, character tuple)."""

    group: object
    n: int
    components: list = field(default_factory=list)

    def add(self, entries, label=None):
        entries = tuple(_as_index(self.group, e) for e in entries)
        if len(entries) != self.n:
            raise ValueError(f"component has {len(entries)} characters, "
                             f"expected {self.n}")
        if not spans(self.group, entries):
            raise ValueError(f"component characters {entries} do not "
                             f"generate the group")
        self.components.append((label, entries))
        return self

    def to_text(self):
        G = self.group
        lines = []
        for label, entries in self.components:
            body = ";".join(",".join(str(r) for r in G.residues(e))
                            for e in entries)
            lines.append(f"{label} : {body}" if label else body)
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, group, n, text):
        data = cls(group, n)
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            label = None
            if ":" in line:
                head, _, line = line.partition(":")
                label = head.strip() or None
            parts = line.split(";") if ";" in line else line.split(",")
            entries = []
            for part in parts:
                part = part.strip()
                if "," in part:
                    entries.append(group.element(
                        [int(x) for x in part.split(",")]))
                else:
                    entries.append(group.element(int(part)))
            data.add(entries, label=label)
        return data


def beta_class(data, index):
    """Class of a fixed-locus description: sum of its component symbols."""
    out = {}
    for _, entries in data.components:
        sym, _ = canonicalize(data.group, entries, "B")
        k = index.position(sym.entries)
        out[k] = out.get(k, 0) + 1
    return SymbolVector(index, out)


def beta_class_by_label(data, index):
    """Per-label classes, for the refined invariant with component labels."""
    out = {}
    for label, entries in data.components:
        sym, _ = canonicalize(data.group, entries, "B")
        k = index.position(sym.entries)
        vec = out.setdefault(label, {})
        vec[k] = vec.get(k, 0) + 1
    return {label: SymbolVector(index, vec) for label, vec in out.items()}


@dataclass(frozen=True)
class BlowupSpec:
    """Local data of a blowup center (see module docstring)."""

    group: object
    case: str              # "I", "II" or "III"
    d1: int
    d2: int
    d3: int
    d4: int
    b_chars: tuple = ()    # d3 nonzero characters
    a_chars: tuple = ()    # m distinct nonzero characters
    kappas: tuple = ()     # multiplicities, sum = d4

    def __post_init__(self):
        G = self.group
        object.__setattr__(self, "b_chars",
                           tuple(_as_index(G, b) for b in self.b_chars))
        object.__setattr__(self, "a_chars",
                           tuple(_as_index(G, a) for a in self.a_chars))
        d1, d2, d3, d4 = self.d1, self.d2, self.d3, self.d4
        if min(d1, d2, d3, d4) < 0:
            raise ValueError("negative dimension")
        if d3 + d4 < 1:
            raise ValueError("center must see a nontrivial normal direction")
        if d1 + d4 < 2:
            raise ValueError("center must have codimension >= 2")
        if len(self.b_chars) != d3:
            raise ValueError("need d3 characters b")
        if len(self.a_chars) != len(self.kappas):
            raise ValueError("characters a and multiplicities mismatch")
        if sum(self.kappas) != d4:
            raise ValueError("multiplicities must sum to d4")
        if any(k < 1 for k in self.kappas):
            raise ValueError("multiplicities must be >= 1")
        if 0 in self.b_chars or 0 in self.a_chars:
            raise ValueError("characters b, a must be nonzero")
        if len(set(self.a_chars)) != len(self.a_chars):
            raise ValueError("characters a must be pairwise distinct")
        if self.case == "I":
            if d1 != 0 or d4 < 2:
                raise ValueError("case I requires d1 = 0 and d4 >= 2")
        elif self.case == "II":
            if d1 < 1 or d4 < 1:
                raise ValueError("case II requires d1, d4 >= 1")
        elif self.case == "III":
            if d1 < 2 or d3 < 1 or d4 != 0:
                raise ValueError("case III requires d1 >= 2, d3 >= 1, d4 = 0")
        else:
            raise ValueError(f"unknown case {self.case!r}")
        if not spans(G, self.b_chars + self.a_chars):
            raise ValueError("tangent characters do not generate the group")

    @property
    def n(self):
        return self.d1 + self.d2 + self.d3 + self.d4

    def _expanded_a(self):
        out = []
        for a, k in zip(self.a_chars, self.kappas):
            out.extend([a] * k)
        return tuple(out)

    def new_component(self, i):
        """Character tuple of the i-th new fixed component of the blowup."""
        G = self.group
        ai = self.a_chars[i]
        ent = []
        if self.case == "II":
            ent.extend([G.neg(ai)] * self.d1)
        ent.append(ai)
        ent.extend([0] * (self.kappas[i] - 1))
        for j, (a, k) in enumerate(zip(self.a_chars, self.kappas)):
            if j != i:
                ent.extend([G.sub(a, ai)] * k)
        ent.extend(self.b_chars)
        ent.extend([0] * self.d2)
        return tuple(ent)

    def old_component(self):
        """Character tuple of the component removed in case I."""
        return (0,) * self.d2 + self.b_chars + self._expanded_a()


def blowup_delta(spec, index):
    """Added-minus-removed class contribution of one blowup center."""
    G = spec.group
    out = {}

    def acc(entries, coeff):
        sym, _ = canonicalize(G, entries, "B")
        k = index.position(sym.entries)
        nv = out.get(k, 0) + coeff
        if nv:
            out[k] = nv
        else:
            del out[k]

    if spec.case == "III":
        return SymbolVector(index, {})
    for i in range(len(spec.a_chars)):
        acc(spec.new_component(i), 1)
    if spec.case == "I":
        acc(spec.old_component(), -1)
    return SymbolVector(index, out)


def certify_invariance(spec, relations, data=None, *, nprimes=2, seed=0,
                       exact=False):
    """True iff the blowup's delta lies in the relation row span.

    With exact=True membership is certified over Z; otherwise it is
    checked mod several word-sized primes.  `data` (if given) is only
    validated for compatibility.
    """
    index = relations.index
    if data is not None:
        if data.group != spec.group or data.n != spec.n:
            raise ValueError("fixed-locus data incompatible with the center")
    if spec.n != index.n or spec.group != index.group:
        raise ValueError("blowup center incompatible with the relations")
    delta = blowup_delta(spec, index)
    if not delta.coeffs:
        return True
    if exact:
        return integer_row_span(relations.matrix).contains(delta.coeffs)
    primes = PrimeSource(seed=seed, avoid=spec.group.order).take(nprimes)
    return all(ModpRowSpan(relations.matrix, p).contains(delta.coeffs)
               for p in primes)


def random_blowup_spec(rng, G, n, case):
    """Draw a random valid blowup center for property tests."""
    for _ in range(1000):
        if case == "I":
            d1 = 0
            d4 = rng.randint(2, n)
        elif case == "II":
            d1 = rng.randint(1, n - 1)
            d4 = rng.randint(1, n - d1)
        else:
            if n < 3:
                raise ValueError("case III needs n >= 3")
            d1 = rng.randint(2, n - 1)
            d4 = 0
        rest = n - d1 - d4
        if case == "III":
            d3 = rng.randint(1, rest)
        else:
            d3 = rng.randint(0, rest)
        d2 = rest - d3
        nonzero = [e for e in range(1, G.order)]
        b = tuple(rng.choice(nonzero) for _ in range(d3))
        if d4:
            m = rng.randint(1, d4)
            a = tuple(rng.sample(nonzero, m))
            kappas = [1] * m
            for _ in range(d4 - m):
                kappas[rng.randrange(m)] += 1
            kappas = tuple(kappas)
        else:
            a, kappas = (), ()
        if not spans(G, b + a):
            continue
        try:
            return BlowupSpec(G, case, d1, d2, d3, d4, b, a, kappas)
        except ValueError:
            continue
    raise RuntimeError("could not draw a valid blowup center")
