"""Expansion-factor and comparison coordinates, twisting, bounded cancellation and distortion certificates."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .ct import CtData
from .errors import ConstantsUnavailable, GrowthError, LabelMismatch
from .graph import Circuit, free_reduce, inv
from .maps import GraphMap

ORBIT_CAP = 2_000_000


# ---------------------------------------------------------------------------
# Omega coordinates
# ---------------------------------------------------------------------------

@dataclass
class OmegaVector:
    pf: dict = field(default_factory=dict)  # "PF:<stratum>" -> signed log lambda
    comp: dict = field(default_factory=dict)  # linear edge / family label -> integer

    def labels(self) -> tuple:
        return tuple(sorted(self.pf)), tuple(sorted(self.comp))

    def _check(self, other: "OmegaVector"):
        if self.labels() != other.labels():
            raise LabelMismatch(f"coordinate labels differ: {self.labels()} vs {other.labels()}")

    def __add__(self, other: "OmegaVector") -> "OmegaVector":
        self._check(other)
        return OmegaVector(
            {k: self.pf[k] + other.pf[k] for k in self.pf},
            {k: self.comp[k] + other.comp[k] for k in self.comp},
        )

    def scale(self, c: int) -> "OmegaVector":
        return OmegaVector({k: c * v for k, v in self.pf.items()}, {k: c * v for k, v in self.comp.items()})

    def zero_like(self) -> "OmegaVector":
        return self.scale(0)

    @property
    def empty(self) -> bool:
        return not self.pf and not self.comp

    def max_abs_comp(self) -> int:
        return max((abs(v) for v in self.comp.values()), default=0)

    def flat(self) -> dict:
        """PF coordinates, then linear edges, then families (construction order)."""
        return {**self.pf, **self.comp}

    def to_json(self) -> dict:
        return {"pf": dict(self.pf), "comp": dict(self.comp)}


def omega_vector(ct: CtData) -> OmegaVector:
    """One log-lambda coordinate per EG stratum, one integer per linear edge and per EXC/QE family.

    A CT tagged ``inverse`` stands for the inverse of the element of interest,
    so every coordinate is negated.
    """
    sign = -1 if ct.inverse else 1
    pf = {f"PF:{s.name}": sign * math.log(s.eigenvalue) for s in ct.td.eg_strata()}
    comp = {le.label: sign * le.exponent for le in ct.linear_edges}
    for fam in ct.exceptional_families + ct.qe_families:
        comp[fam.omega_label] = sign * fam.omega
    return OmegaVector(pf, comp)


@dataclass
class GenericityVerdict:
    generic: bool
    degenerate: bool
    zero_coordinates: list

    def to_json(self) -> dict:
        return {
            "verdict": "generic" if self.generic else "non-generic",
            "generic": self.generic,
            "degenerate": self.degenerate,
            "zero_coordinates": self.zero_coordinates,
        }


def genericity_check(vectors) -> list:
    vectors = list(vectors)
    if vectors:
        ref = vectors[0].labels()
        for v in vectors[1:]:
            if v.labels() != ref:
                raise LabelMismatch(f"coordinate labels differ: {ref} vs {v.labels()}")
    out = []
    for v in vectors:
        zeros = sorted(k for k, x in v.flat().items() if x == 0)
        out.append(GenericityVerdict(not zeros, v.empty, zeros))
    return out


# ---------------------------------------------------------------------------
# twisting
# ---------------------------------------------------------------------------

@dataclass
class TwistReport:
    value: int
    sigma: tuple | None
    position: int | None
    k: int

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness": None if self.sigma is None else {
                "sigma": " ".join(self.sigma), "position": self.position, "k": self.k,
            },
        }


def _text(tau):
    """(scan text, cyclic length or None)."""
    word = tuple(tau)
    if isinstance(tau, Circuit):
        return word + word, len(word)
    return word, None


def tw_about(tau, sigma) -> TwistReport:
    """Largest k such that some rotation of sigma, raised to k, is a subword of tau."""
    sig = tuple(sigma)
    if not sig:
        raise GrowthError("sigma must be nonempty")
    text, n = _text(tau)
    m = len(sig)
    limit = (n // m) if n is not None else len(text) // m
    best = TwistReport(0, None, None, 0)
    if limit == 0:
        return best
    rotations = [sig[i:] + sig[:i] for i in range(m)] if isinstance(sigma, Circuit) else [sig]
    for rot in rotations:
        L = len(text)
        runs = [0] * (L + m + 1)
        for i in range(L - m, -1, -1):
            if text[i:i + m] == rot:
                runs[i] = 1 + runs[i + m]
        span = n if n is not None else L
        for i in range(span):
            k = min(runs[i], limit)
            if k > best.value:
                best = TwistReport(k, rot, i, k)
    return best


def _lce(text, i, j) -> int:
    n = len(text)
    k = 0
    while j + k < n and text[i + k] == text[j + k]:
        k += 1
    return k


def _lcs(text, i, j) -> int:
    k = 0
    while i - k - 1 >= 0 and text[i - k - 1] == text[j - k - 1]:
        k += 1
    return k


def tw_max(tau, cyclic: bool | None = None) -> TwistReport:
    """Maximum twisting over all circuits, from the maximal repetitions of the doubled word.

    For each period p, sample positions at multiples of p; every run of period
    p and length >= 2p contains a sample i with text[i:i+p] inside the run, and
    extending the match of text against its p-shift backwards and forwards from
    i recovers the whole run.
    """
    word = tuple(tau)
    if not word:
        raise GrowthError("empty word")
    if cyclic is None:
        cyclic = isinstance(tau, Circuit)
    text = word + word if cyclic else word
    n = len(word)
    L = len(text)
    best = TwistReport(1, word, 0, 1)
    for p in range(1, n // 2 + 1):
        i = 0
        while i + p < L:
            fwd = _lce(text, i, i + p)
            back = _lcs(text, i, i + p)
            length = back + fwd + p
            k = min(length, n) // p
            if k > best.value:
                s = i - back
                best = TwistReport(k, text[s:s + p], s % n, k)
            i += p
    return best


# ---------------------------------------------------------------------------
# bounded cancellation
# ---------------------------------------------------------------------------

def _reduced_words(f: GraphMap, max_len: int) -> list:
    graph = f.domain
    out = []
    frontier = [(e,) for e in graph.oriented_edges()]
    while frontier:
        out.extend(frontier)
        if len(frontier[0]) >= max_len:
            break
        frontier = [
            w + (e,) for w in frontier for e in graph.directions_at(graph.terminus(w[-1])) if e != inv(w[-1])
        ]
    return out


def _cancellation(a: tuple, b: tuple) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == inv(b[k]):
        k += 1
    return k


def bcc_estimate(f: GraphMap, depth: int) -> tuple:
    """Largest cancellation between f_#(alpha) and f_#(beta) over reduced alpha.beta, |alpha|,|beta| <= depth."""
    if depth < 1:
        raise GrowthError("depth must be at least 1")
    words = _reduced_words(f, depth)
    images = {w: f.f_sharp(w) for w in words}
    by_start: dict = {}
    graph = f.domain
    for w in words:
        by_start.setdefault(w[0], []).append(w)
    best = 0
    for a in words:
        for e in graph.directions_at(graph.terminus(a[-1])):
            if e == inv(a[-1]):
                continue
            for b in by_start.get(e, []):
                best = max(best, _cancellation(images[a], images[b]))
    note = f"lower bound for the bounded cancellation constant; exhaustive only up to depth {depth}"
    return best, note


# ---------------------------------------------------------------------------
# twist growth
# ---------------------------------------------------------------------------

@dataclass
class TwistGrowth:
    rows: list  # {t, tw, sigma, k, length}
    threshold: int
    t0: int | None
    degenerate: bool

    def to_json(self) -> dict:
        return {
            "threshold": self.threshold,
            "t0": self.t0,
            "status": "degenerate" if self.degenerate else ("found" if self.t0 is not None else "not found"),
            "rows": self.rows,
        }


def twist_growth(ct: CtData, sigma0: Circuit, T: int, cap: int = ORBIT_CAP) -> TwistGrowth:
    omega = omega_vector(ct)
    threshold = omega.max_abs_comp()
    degenerate = not omega.comp
    rows = []
    sigma = sigma0
    prev = None
    t0 = None
    for t in range(T + 1):
        if t > 0:
            sigma = ct.f.f_sharp(sigma)
            if len(sigma) > cap:
                raise GrowthError(f"orbit circuit at t={t} exceeds {cap} edges")
        rep = tw_max(sigma)
        rows.append({"t": t, "tw": rep.value, "sigma": " ".join(rep.sigma), "k": rep.k, "length": len(sigma)})
        if (not degenerate and t0 is None and prev is not None and rep.value - prev >= threshold):
            t0 = t
        prev = rep.value
    return TwistGrowth(rows, threshold, t0, degenerate)


# ---------------------------------------------------------------------------
# distortion certificates
# ---------------------------------------------------------------------------

@dataclass
class DistortionCertificate:
    p: list
    omega: OmegaVector
    bound_eg: float
    bound_pg: float
    lower: float
    constants: dict  # name -> {"value", "provenance"}
    status: str
    chain: list
    checks: list

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "omega": self.omega.to_json(),
            "bound_EG": self.bound_eg,
            "bound_PG": self.bound_pg,
            "lower_bound": self.lower,
            "constants": self.constants,
            "status": self.status,
            "chain": self.chain,
            "checks": self.checks,
        }


def _random_circuit(f: GraphMap, rng: random.Random, length: int):
    graph = f.domain
    for _ in range(100):
        v = rng.choice(graph.vertices)
        word = []
        here = v
        for _ in range(length):
            opts = [e for e in graph.directions_at(here) if not word or e != inv(word[-1])]
            e = rng.choice(opts)
            word.append(e)
            here = graph.terminus(e)
        if here != v:
            continue
        w = free_reduce(word)
        i, j = 0, len(w)
        while j - i >= 2 and w[i] == inv(w[j - 1]):
            i, j = i + 1, j - 1
        if j > i:
            return Circuit(w[i:j])
    return None


def generator_twist_check(f: GraphMap, d2: float, samples: int = 50, length: int = 12, seed: int = 0) -> dict:
    """Search for circuits w with tw(f_#(w)) > tw(w) + d2; reports what was tried."""
    rng = random.Random(seed)
    tried = 0
    for _ in range(samples):
        w = _random_circuit(f, rng, length)
        if w is None:
            continue
        tried += 1
        before, after = tw_max(w).value, tw_max(f.f_sharp(w)).value
        if after > before + d2:
            return {"result": "counterexample", "circuit": str(w), "tw_before": before, "tw_after": after}
    return {"result": "no counterexample found", "samples": tried}


def distortion_certificate(gens, p, D1=None, D2=None, K2=None, estimate: bool = True,
                           bcc_depth: int = 2, twist_samples: int = 20) -> DistortionCertificate:
    """Evaluate both lower-bound chains for psi = prod gen_i^p_i in Omega coordinates."""
    gens = list(gens)
    p = [int(x) for x in p]
    if len(gens) != len(p):
        raise GrowthError(f"{len(gens)} generators but {len(p)} exponents")
    if not gens:
        raise GrowthError("no generators")
    vecs = [omega_vector(ct) for ct in gens]
    genericity_check(vecs)  # label alignment
    omega = vecs[0].zero_like()
    for v, c in zip(vecs, p):
        omega = omega + v.scale(c)

    chain = []
    checks = []
    constants = {}
    chain.append({"step": "Omega(psi) = sum p_i Omega(g_i)", "p": p, "value": omega.flat()})

    if D1 is not None:
        constants["D1"] = {"value": float(D1), "provenance": "configured"}
    else:
        d1 = max(math.log(max(1, ct.f.max_image_length())) for ct in gens)
        constants["D1"] = {"value": d1, "provenance": "computed"}
    pf_vals = [abs(v) for vec in vecs for v in vec.pf.values()]
    if pf_vals:
        constants["K1"] = {"value": min(pf_vals), "provenance": "computed"}

    bccs = None
    if D2 is None or K2 is None:
        if not estimate:
            raise ConstantsUnavailable("D2 and K2 must be configured when estimation is disabled")
        bccs = [bcc_estimate(ct.f, bcc_depth)[0] for ct in gens]
    if K2 is not None:
        constants["K2"] = {"value": float(K2), "provenance": "configured"}
    else:
        constants["K2"] = {"value": float(max(bccs)), "provenance": "estimated"}
    if D2 is not None:
        constants["D2"] = {"value": float(D2), "provenance": "configured"}
    else:
        d2 = max(2 * b + ct.f.max_image_length() for b, ct in zip(bccs, gens))
        constants["D2"] = {"value": float(max(1, d2)), "provenance": "estimated"}

    d1 = constants["D1"]["value"]
    max_pf = max(omega.pf.values(), default=0.0)
    if d1 > 0:
        bound_eg = max(0.0, max_pf) / d1
        chain.append({"step": "bound_EG = max(0, max PF coordinate) / D1",
                      "max_pf": max_pf, "D1": d1, "value": bound_eg})
    else:
        bound_eg = 0.0
        chain.append({"step": "bound_EG = 0 (D1 = 0: generators do not stretch)", "value": 0.0})
    if "K1" in constants:
        chain.append({"step": "K1 form: (K1 / D1) * max p_i", "K1": constants["K1"]["value"],
                      "value": (constants["K1"]["value"] / d1 * max(p)) if d1 > 0 else 0.0,
                      "note": "K1 folded into PF coordinates above; shown for comparison"})

    d2 = constants["D2"]["value"]
    k2 = constants["K2"]["value"]
    max_comp = omega.max_abs_comp()
    bound_pg = max_comp / d2 - 2 * k2 / d2
    chain.append({"step": "bound_PG = max|comp| / D2 - 2 K2 / D2",
                  "max_comp": max_comp, "D2": d2, "K2": k2, "value": bound_pg})
    lower = max(bound_eg, bound_pg, 0.0)
    chain.append({"step": "lower bound = max(bound_EG, bound_PG, 0)", "value": lower})

    if constants["D2"]["provenance"] == "estimated":
        for i, ct in enumerate(gens):
            res = generator_twist_check(ct.f, d2, samples=twist_samples, seed=i)
            checks.append(dict(res, generator=i))

    unconditional = all(c["provenance"] == "configured" for k, c in constants.items() if k != "K1")
    status = "unconditional" if unconditional else "conditional"
    return DistortionCertificate(p, omega, bound_eg, bound_pg, lower, constants, status, chain, checks)
