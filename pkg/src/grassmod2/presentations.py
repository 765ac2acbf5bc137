"""Rings given by generators and relations, read from a small text format.

A presentation file is a list of directives, one per line; ``#`` starts a
comment.

    presentation NAME
    int NAME                        integer input, supplied when instantiating
    let NAME = INTEXPR              derived integer
    require COND                    precondition on the integers
    generator NAME INTEXPR          generator and its degree
    param NAME INTEXPR [over G ...] undetermined element of the given degree,
                                    ranging over the subring generated by G ...
    fix NAME 0 when COND            the parameter must vanish when COND holds
    relation [when COND :] POLY     relation, optionally conditional
    top INTEXPR                     degree of the fundamental class

INTEXPR and COND are Python integer expressions (``+ - * // % **``,
comparisons, ``and``/``or``/``not``, ``min``, ``max``, ``bitlen``) over the
integers in scope.  POLY is built from generators, parameters, the constants
``0`` and ``1``, ``+``, ``-`` (equal to ``+`` mod 2), ``*``, ``^`` with an
integer exponent (a number, an integer name, or a parenthesised INTEXPR) and
``g(INTEXPR)``, the reduced dual class ``g_i`` written in the generators
``w2`` and ``w3``.
"""

from __future__ import annotations

import ast
import itertools
import operator
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .f2core import PolyF2, PolyRing, substitute
from .grassmann import gysin_report, two_power_bracket
from .limits import LIMITS, ResourceCapExceeded
from .quotient import GradedQuotientRing, cup_length, pairing_perfect
from .swclasses import g_classes


class PresentationError(ValueError):
    """Malformed presentation text or inconsistent instantiation."""


class PreconditionError(ValueError):
    """Integer inputs or parameter values violate a stated requirement."""


# -- integer expressions -------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}
_CMPS = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}
_FUNCS = {"min": min, "max": max, "bitlen": lambda x: int(x).bit_length()}


def eval_int(text: str, env: Mapping[str, int]):
    """Evaluate an integer expression or condition without ``eval``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise PresentationError(f"bad integer expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) in (int, bool):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise PresentationError(f"unknown integer {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return -ev(node.operand)
            if isinstance(node.op, ast.UAdd):
                return ev(node.operand)
            if isinstance(node.op, ast.Not):
                return not ev(node.operand)
        if isinstance(node, ast.BoolOp):
            vals = [ev(v) for v in node.values]
            return all(vals) if isinstance(node.op, ast.And) else any(vals)
        if isinstance(node, ast.Compare):
            left = ev(node.left)
            for op, right in zip(node.ops, node.comparators):
                if type(op) not in _CMPS:
                    break
                r = ev(right)
                if not _CMPS[type(op)](left, r):
                    return False
                left = r
            else:
                return True
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and not node.keywords
        ):
            return _FUNCS[node.func.id](*[ev(a) for a in node.args])
        raise PresentationError(f"unsupported syntax in {text!r}")

    return ev(tree)


# -- polynomial expressions ----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


class _PolyParser:
    def __init__(self, text: str, ring: PolyRing, ints: Mapping[str, int], values):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.ints = ints
        self.values = values  # name -> PolyF2 (generators and parameters)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise PresentationError(f"expected {expected or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> PolyF2:
        p = self.expr()
        if self.peek() is not None:
            raise PresentationError(f"trailing {self.peek()!r} in {self.text!r}")
        return p

    def expr(self) -> PolyF2:
        if self.peek() in ("+", "-"):
            self.take()
        p = self.term()
        while self.peek() in ("+", "-"):
            self.take()
            p = p + self.term()
        return p

    def term(self) -> PolyF2:
        p = self.factor()
        while self.peek() == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> PolyF2:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            base = base ** self.int_atom()
        return base

    def balanced(self) -> str:
        self.take("(")
        depth, parts = 1, []
        while True:
            tok = self.take()
            if tok == "(":
                depth += 1
            elif tok == ")":
                depth -= 1
                if depth == 0:
                    return "".join(parts)
            parts.append(tok)

    def int_atom(self) -> int:
        tok = self.peek()
        if tok == "(":
            val = eval_int(self.balanced(), self.ints)
        elif tok is not None and tok.isdigit():
            val = int(self.take())
        elif tok in self.ints:
            val = self.ints[self.take()]
        else:
            raise PresentationError(f"bad exponent in {self.text!r}")
        if not isinstance(val, int) or val < 0:
            raise PresentationError(f"exponent {val!r} in {self.text!r}")
        return val

    def atom(self) -> PolyF2:
        tok = self.peek()
        if tok is None:
            raise PresentationError(f"unexpected end of {self.text!r}")
        if tok == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if tok.isdigit():
            self.take()
            return self.ring.one() if int(tok) % 2 else self.ring.zero()
        if tok == "g" and self.i + 1 < len(self.toks) and self.toks[self.i + 1] == "(":
            self.take()
            return self.g_class(eval_int(self.balanced(), self.ints))
        if tok in self.values:
            self.take()
            return self.values[tok]
        if tok in self.ints:
            self.take()
            return self.ring.one() if self.ints[tok] % 2 else self.ring.zero()
        raise PresentationError(f"unknown symbol {tok!r} in {self.text!r}")

    def g_class(self, i: int) -> PolyF2:
        if "w2" not in self.values or "w3" not in self.values:
            raise PresentationError("g(i) needs generators w2 and w3")
        if i < 0:
            raise PresentationError("g(i) needs i >= 0")
        gi = g_classes(3, i)[i]
        return substitute(gi, [self.values["w2"], self.values["w3"]], self.ring)


def parse_poly(text: str, ring: PolyRing, ints=None, values=None) -> PolyF2:
    vals = {name: ring.gen(name) for name in ring.names}
    vals.update(values or {})
    return _PolyParser(text, ring, ints or {}, vals).parse()


# -- presentations --------------------------------------------------------------


@dataclass
class Presentation:
    name: str
    ints: list = field(default_factory=list)
    lets: list = field(default_factory=list)  # (name, expr)
    requires: list = field(default_factory=list)
    generators: list = field(default_factory=list)  # (name, degexpr)
    params: list = field(default_factory=list)  # (name, degexpr, over)
    fixes: list = field(default_factory=list)  # (name, cond)
    relations: list = field(default_factory=list)  # (cond or None, poly text)
    top: str | None = None
    source: str = ""

    def instantiate(self, **values: int) -> "Instance":
        missing = [k for k in self.ints if k not in values]
        if missing:
            raise PreconditionError(f"{self.name}: missing integers {missing}")
        env = {k: int(values[k]) for k in self.ints}
        for name, expr in self.lets:
            env[name] = eval_int(expr, env)
        for cond in self.requires:
            if not eval_int(cond, env):
                raise PreconditionError(f"{self.name}: requirement {cond!r} fails for {env}")
        names, degs = [], []
        for name, expr in self.generators:
            names.append(name)
            degs.append(eval_int(expr, env))
        if any(d <= 0 for d in degs):
            raise PreconditionError(f"{self.name}: nonpositive generator degree {degs}")
        ring = PolyRing(names, degs)
        params = {}
        for name, expr, over in self.params:
            params[name] = (eval_int(expr, env), tuple(over))
        fixed = {name for name, cond in self.fixes if eval_int(cond, env)}
        rels = [text for cond, text in self.relations if cond is None or eval_int(cond, env)]
        if self.top is None:
            raise PresentationError(f"{self.name}: no top degree")
        return Instance(self, env, ring, params, fixed, rels, eval_int(self.top, env))


@dataclass
class Instance:
    presentation: Presentation
    ints: dict
    ring: PolyRing
    params: dict  # name -> (degree, over-generators)
    fixed: set
    relation_texts: list
    top: int

    @property
    def name(self) -> str:
        return self.presentation.name

    def coerce_params(self, params: Mapping | None) -> dict:
        params = dict(params or {})
        unknown = set(params) - set(self.params)
        if unknown:
            raise PresentationError(f"{self.name}: unknown parameters {sorted(unknown)}")
        out = {}
        for name, (deg, _over) in self.params.items():
            val = params.get(name, 0)
            if isinstance(val, int):
                val = self.ring.one() if val % 2 else self.ring.zero()
            elif isinstance(val, str):
                val = parse_poly(val, self.ring, self.ints)
            if val.ring != self.ring:
                raise PresentationError(f"parameter {name} lives in another ring")
            if val and (not val.is_homogeneous() or val.degree() != deg):
                raise PreconditionError(f"parameter {name} must have degree {deg}")
            if val and name in self.fixed:
                raise PreconditionError(f"{self.name}: parameter {name} must be 0 here")
            out[name] = val
        return out

    def relations(self, params: Mapping | None = None) -> list[PolyF2]:
        vals = self.coerce_params(params)
        out = []
        for text in self.relation_texts:
            r = parse_poly(text, self.ring, self.ints, vals)
            if r and not r.is_homogeneous():
                raise PresentationError(f"{self.name}: relation {text!r} is not homogeneous")
            out.append(r)
        return out

    def subring(self, over: tuple) -> GradedQuotientRing:
        """The ring on ``over`` cut out by the relations that use only ``over``."""
        sub = PolyRing(list(over), [self.ring.degrees[self.ring.index(g)] for g in over])
        keep = [self.ring.index(g) for g in over]
        rels = []
        for r in self.relations({}):
            if all(
                self.ring.exponents(m)[v] == 0
                for m in r.terms
                for v in range(self.ring.nvars)
                if v not in keep
            ):
                rels.append(
                    PolyF2(
                        sub,
                        frozenset(
                            sub.monomial([self.ring.exponents(m)[v] for v in keep])
                            for m in r.terms
                        ),
                    )
                )
        return GradedQuotientRing(sub, rels, self.top, truncate=True)

    def embed(self, p: PolyF2) -> PolyF2:
        """Map a polynomial in a subset of the generators into ``self.ring``."""
        return substitute(p, [self.ring.gen(n) for n in p.ring.names], self.ring)

    def param_candidates(self, name: str) -> list[PolyF2]:
        """Every value the parameter may take: the whole slot space."""
        deg, over = self.params[name]
        if name in self.fixed:
            return [self.ring.zero()]
        if deg == 0:
            return [self.ring.zero(), self.ring.one()]
        if not over:
            return [self.ring.zero()]
        sub = self.subring(over)
        basis = [self.embed(sub.element(deg, 1 << i)) for i in range(sub.dim(deg))]
        out = []
        for bits in itertools.product((0, 1), repeat=len(basis)):
            p = self.ring.zero()
            for b, e in zip(bits, basis):
                if b:
                    p = p + e
            out.append(p)
        return out


def parse_presentation(text: str, source: str = "<string>") -> Presentation:
    pres = Presentation(name="", source=source)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        where = f"{source}:{lineno}"
        if word == "presentation":
            pres.name = rest
        elif word == "int":
            pres.ints.extend(rest.split())
        elif word == "let":
            name, eq, expr = rest.partition("=")
            if not eq:
                raise PresentationError(f"{where}: let needs '='")
            pres.lets.append((name.strip(), expr.strip()))
        elif word == "require":
            pres.requires.append(rest)
        elif word == "generator":
            name, _, expr = rest.partition(" ")
            pres.generators.append((name, expr.strip()))
        elif word == "param":
            name, _, expr = rest.partition(" ")
            over: list[str] = []
            if " over " in f" {expr} ":
                expr, _, tail = f" {expr} ".partition(" over ")
                over = tail.split()
            pres.params.append((name, expr.strip(), over))
        elif word == "fix":
            m = re.fullmatch(r"(\w+)\s+0\s+when\s+(.+)", rest)
            if not m:
                raise PresentationError(f"{where}: expected 'fix NAME 0 when COND'")
            pres.fixes.append((m.group(1), m.group(2)))
        elif word == "relation":
            m = re.fullmatch(r"when\s+(.+?)\s*:\s*(.+)", rest)
            if m:
                pres.relations.append((m.group(1), m.group(2)))
            else:
                pres.relations.append((None, rest))
        elif word == "top":
            pres.top = rest
        else:
            raise PresentationError(f"{where}: unknown directive {word!r}")
    if not pres.name:
        raise PresentationError(f"{source}: missing 'presentation NAME'")
    return pres


def fixture_dir() -> Path:
    return Path(str(resources.files(__package__) / "fixtures"))


def fixture_names() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.pres"))


_fixture_cache: dict[str, Presentation] = {}


def load_presentation(name_or_path: str) -> Presentation:
    """A shipped fixture by stem (``"stiefel3"``) or any presentation file."""
    path = Path(name_or_path)
    if not path.suffix:
        path = fixture_dir() / f"{name_or_path}.pres"
    key = str(path)
    if key not in _fixture_cache:
        _fixture_cache[key] = parse_presentation(path.read_text(), path.name)
    return _fixture_cache[key]


def build_presented_ring(
    inst: Instance, params: Mapping | None = None
) -> GradedQuotientRing:
    """Quotient by the substituted relations, truncated above the top degree.

    The result may have zero top degree for bad parameter values; callers that
    search parameters use that as a rejection signal.
    """
    ring = GradedQuotientRing(inst.ring, inst.relations(params), inst.top, truncate=True)
    ring.declared_top = inst.top
    return ring


def top_vanishes(ring: GradedQuotientRing) -> bool:
    return ring.dim(ring.cap) == 0


# -- the oriented 3-plane case --------------------------------------------------


def oriented3_instance(n: int) -> Instance:
    t = two_power_bracket(n)
    if n == 2**t:
        return load_presentation("oriented3_power").instantiate(n=n)
    if 2**t - 3 <= n <= 2**t - 1:
        return load_presentation("oriented3_near_power").instantiate(n=n)
    raise PreconditionError(f"n={n} is not 2^t, 2^t-1, 2^t-2 or 2^t-3")


def oriented3_presented(n: int, params: Mapping | None = None) -> GradedQuotientRing:
    return build_presented_ring(oriented3_instance(n), params)


def duality_ok(ring: GradedQuotientRing, expected_dims=None) -> bool:
    if ring.dim(ring.cap) != 1:
        return False
    if expected_dims is not None and tuple(ring.dims()) != tuple(expected_dims):
        return False
    return all(pairing_perfect(ring, d) for d in range(ring.cap + 1))


def search_params(inst: Instance, accept, free: set | None = None) -> list[dict]:
    """Every assignment of the instance's parameters accepted by ``accept``.

    Parameters outside ``free`` (when given) are held at zero.
    """
    names = list(inst.params)
    spaces = []
    for name in names:
        if free is not None and name not in free:
            spaces.append([inst.ring.zero()])
        else:
            spaces.append(inst.param_candidates(name))
    size = 1
    for s in spaces:
        size *= len(s)
    if size > LIMITS.cap_search:
        raise ResourceCapExceeded(f"{inst.name}: {size} parameter choices > cap {LIMITS.cap_search}")
    found = []
    for combo in itertools.product(*spaces):
        assignment = dict(zip(names, combo))
        if accept(build_presented_ring(inst, assignment)):
            found.append(assignment)
    return found


def feasible_params(n: int, honour_fixes: bool = False) -> list[dict]:
    """Parameter values whose ring matches ``G~_{n,3}``: the Gysin Betti
    numbers in every degree and a perfect duality pairing.

    By default the whole slot space is searched, including values a ``fix``
    directive would rule out, so that such a constraint is tested rather than
    assumed.
    """
    inst = oriented3_instance(n)
    if not honour_fixes:
        inst.fixed = set()
    betti = gysin_report(n, 3).betti
    return search_params(inst, lambda r: duality_ok(r, betti))


def format_params(assignment: Mapping) -> dict:
    return {k: str(v) for k, v in sorted(assignment.items())}


def cup_length_presented(n: int, params: Mapping | None = None) -> int:
    return cup_length(oriented3_presented(n, params))


# -- ring homomorphisms ---------------------------------------------------------


@dataclass
class HomSpec:
    source: Instance
    target: Instance
    images: dict  # source generator -> polynomial text over target generators
    label: str = ""


def verify_hom(spec: HomSpec, params_source=None, params_target=None) -> bool:
    """Every source relation maps to zero in the target ring."""
    tgt = build_presented_ring(spec.target, params_target)
    R = spec.target.ring
    imgs = []
    for name, deg in zip(spec.source.ring.names, spec.source.ring.degrees):
        text = spec.images.get(name)
        if text is None:
            raise PresentationError(f"no image for generator {name}")
        img = parse_poly(str(text), R, spec.target.ints)
        if img and (not img.is_homogeneous() or img.degree() != deg):
            raise PresentationError(f"image of {name} is not of degree {deg}")
        imgs.append(img)
    for rel in spec.source.relations(params_source):
        if not tgt.is_zero(substitute(rel, imgs, R)):
            return False
    return True


def identity_hom(inst: Instance) -> HomSpec:
    return HomSpec(inst, inst, {g: g for g in inst.ring.names}, "identity")


def restriction_oriented2(n: int) -> HomSpec:
    """``H*(G~_{n+1,2}) -> H*(G~_{n,2})`` induced by the inclusion."""
    if n < 4:
        raise PreconditionError("need n >= 4")
    odd = load_presentation("oriented2_odd")
    even = load_presentation("oriented2_even")
    if n % 2:
        return HomSpec(
            even.instantiate(n=n + 1), odd.instantiate(n=n), {"w2": "w2", "b": "a"},
            f"G~({n + 1},2) -> G~({n},2)",
        )
    return HomSpec(
        odd.instantiate(n=n + 1), even.instantiate(n=n), {"w2": "w2", "a": "w2*b"},
        f"G~({n + 1},2) -> G~({n},2)",
    )


def restriction_w21(N: int) -> HomSpec:
    """``H*(W^{N+1}) -> H*(W^N)`` induced by the inclusion, ``N >= 5``."""
    even = load_presentation("w21_even")
    odd = load_presentation("w21_odd")
    if N % 2:  # W^{2k+2} -> W^{2k+1}
        k = (N - 1) // 2
        return HomSpec(
            even.instantiate(m=k), odd.instantiate(m=k),
            {"w2": "w2", "c": "dhi", "e": "0"}, f"W^{N + 1} -> W^{N}",
        )
    k = N // 2  # W^{2k+1} -> W^{2k}
    return HomSpec(
        odd.instantiate(m=k), even.instantiate(m=k - 1),
        {"w2": "w2", "dlo": "c", "dhi": "w2*c"}, f"W^{N + 1} -> W^{N}",
    )


def sphere_product_poincare(dims_cp: int, spheres: list[int]) -> list[int]:
    """Betti numbers of ``CP^{dims_cp} x S^{a} x S^{b} x ...`` mod 2."""
    poly = [0] * (2 * dims_cp + 1)
    for i in range(dims_cp + 1):
        poly[2 * i] = 1
    for s in spheres:
        out = [0] * (len(poly) + s)
        for i, c in enumerate(poly):
            out[i] += c
            out[i + s] += c
        poly = out
    return poly


def w21_duality_pairs(m: int) -> list[tuple[int, int]]:
    """``(lambda, mu)`` for which the odd ``W^{2m+1}`` ring is a Poincare
    duality algebra with the Betti numbers of ``CP^{m-1} x S^{2m-2} x S^{2m}``."""
    inst = load_presentation("w21_odd").instantiate(m=m)
    expected = sphere_product_poincare(m - 1, [2 * m - 2, 2 * m])
    out = []
    for lam, mu in itertools.product((0, 1), repeat=2):
        if duality_ok(build_presented_ring(inst, {"lam": lam, "mu": mu}), expected):
            out.append((lam, mu))
    return out
