"""File-based front end.

Reads JSON system descriptions (exact rationals only, never decimal floats),
runs the requested pipeline, and emits a deterministic report: identical
inputs and flags produce byte-identical output.  Exit codes: 0 success,
2 malformed input, 3 unmet hypothesis, 4 violated internal invariant
(including tamper detection in `verify`).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import HypothesisError, InternalInvariantError, SystemFileError
from .embedding import embedding_field, time_one_map, verify_equivariance
from .integrals import (
    independence_check,
    monomial_integrals,
    pullback_integrals,
    search_integrals_field,
    search_integrals_map,
    verify_integral_field,
    verify_integral_map,
)
from .normalizer import (
    FieldSystem,
    IntegrabilityReport,
    MapSystem,
    NormalizationResult,
    check_functional_equations,
    classify,
    growth_diagnostic,
    normalize_field,
    normalize_map,
    verify_conjugacy_field,
    verify_conjugacy_map,
)
from .resonance import (
    EigenSpec,
    LatticeBasis,
    RootValue,
    SmallDivisorBound,
    SymbolicBound,
    enumerate_lattice,
    small_divisor_bound_field,
    small_divisor_bound_map,
    transformation_resonant,
    verify_bound,
)
from .scalars import Scalar, scalar_from_json, scalar_to_json
from .series import ScalarSeries, SeriesError, VectorSeries

DEFAULT_LATTICE_BOUND = 10
DEFAULT_ORDER = 8
DEFAULT_TRIALS = 8
TIME_ONE_TERMS = 12

EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_INVARIANT = 4


# -- system files -----------------------------------------------------------------


@dataclass(frozen=True)
class SystemFile:
    kind: str  # "map" | "field"
    n: int
    scalars: str  # "rational" | "gaussian"
    eigen: EigenSpec
    nonlinear: VectorSeries
    lattice_bound: int
    order: int

    def system(self):
        if self.kind == "map":
            return MapSystem(self.eigen, self.nonlinear, self.order)
        return FieldSystem(self.eigen, self.nonlinear, self.order)


def _reject_float(value):
    raise SystemFileError(
        f"decimal literal {value!r} is not accepted: write rationals as "
        "integer pairs [numerator, denominator], e.g. [1, 2] for one half"
    )


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(
                fh,
                parse_float=_reject_float,
                parse_constant=_reject_float,
            )
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SystemFileError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc


def _field(doc: dict, name: str, kinds, where: str):
    if name not in doc:
        raise SystemFileError(f"{where}: missing field '{name}'")
    value = doc[name]
    if kinds is not None and not isinstance(value, kinds):
        raise SystemFileError(f"{where}: field '{name}' has the wrong type")
    return value


def _scalar_field(data, where: str, scalars_tag: str) -> Scalar:
    try:
        value = scalar_from_json(data)
    except ValueError as exc:
        raise SystemFileError(f"{where}: {exc}") from exc
    if scalars_tag == "rational" and len(data) == 4:
        raise SystemFileError(
            f"{where}: gaussian coefficient in a file declaring scalars=rational"
        )
    return value


def parse_system(path: str) -> SystemFile:
    """Load and validate a system description file."""
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SystemFileError(f"{path}: top level must be a JSON object")
    kind = _field(doc, "kind", str, path)
    if kind not in ("map", "field"):
        raise SystemFileError(f"{path}: kind must be 'map' or 'field'")
    n = _field(doc, "n", int, path)
    if n < 1:
        raise SystemFileError(f"{path}: dimension n must be >= 1")
    scalars = doc.get("scalars", "rational")
    if scalars not in ("rational", "gaussian"):
        raise SystemFileError(f"{path}: scalars must be 'rational' or 'gaussian'")
    eigen_doc = _field(doc, "eigen", dict, path)
    form = _field(eigen_doc, "form", str, f"{path}:eigen")
    if form == "additive":
        if kind != "field":
            raise SystemFileError(f"{path}: additive eigenvalues need kind=field")
        values = _field(eigen_doc, "values", list, f"{path}:eigen")
        eigen = EigenSpec.additive(
            [_scalar_field(v, f"{path}:eigen.values[{i}]", scalars) for i, v in enumerate(values)]
        )
    elif form == "mult-rational":
        if kind != "map":
            raise SystemFileError(f"{path}: multiplicative eigenvalues need kind=map")
        values = _field(eigen_doc, "values", list, f"{path}:eigen")
        try:
            eigen = EigenSpec.multiplicative(
                [_scalar_field(v, f"{path}:eigen.values[{i}]", scalars) for i, v in enumerate(values)]
            )
        except ValueError as exc:
            raise SystemFileError(f"{path}:eigen: {exc}") from exc
    elif form == "mult-base":
        if kind != "map":
            raise SystemFileError(f"{path}: mult-base eigenvalues need kind=map")
        exps = _field(eigen_doc, "exponents", list, f"{path}:eigen")
        phases = eigen_doc.get("phases")
        def frac(data, where):
            if not (isinstance(data, list) and len(data) == 2 and all(isinstance(x, int) for x in data)):
                raise SystemFileError(f"{where}: rationals are integer pairs [num, den]")
            if data[1] == 0:
                raise SystemFileError(f"{where}: zero denominator")
            return Fraction(data[0], data[1])
        eigen = EigenSpec.multiplicative_base(
            [frac(a, f"{path}:eigen.exponents[{i}]") for i, a in enumerate(exps)],
            None if phases is None else [frac(b, f"{path}:eigen.phases[{i}]") for i, b in enumerate(phases)],
        )
    else:
        raise SystemFileError(
            f"{path}: eigen form must be additive, mult-rational or mult-base"
        )
    if eigen.n != n:
        raise SystemFileError(
            f"{path}: eigen data has {eigen.n} entries for dimension {n}"
        )
    lattice_bound = doc.get("degree_D", DEFAULT_LATTICE_BOUND)
    order = doc.get("order_N", DEFAULT_ORDER)
    if not isinstance(lattice_bound, int) or lattice_bound < 2:
        raise SystemFileError(f"{path}: degree_D must be an integer >= 2")
    if not isinstance(order, int) or order < 2:
        raise SystemFileError(f"{path}: order_N must be an integer >= 2")
    terms = doc.get("terms", [])
    if not isinstance(terms, list):
        raise SystemFileError(f"{path}: terms must be a list")
    triples = []
    max_deg = order
    for i, term in enumerate(terms):
        where = f"{path}:terms[{i}]"
        if not isinstance(term, dict):
            raise SystemFileError(f"{where}: each term is an object")
        j = _field(term, "component", int, where)
        if not 1 <= j <= n:
            raise SystemFileError(f"{where}: component {j} out of range 1..{n}")
        expo = _field(term, "exponent", list, where)
        if len(expo) != n or not all(isinstance(e, int) and e >= 0 for e in expo):
            raise SystemFileError(
                f"{where}: exponent must be {n} nonnegative integers"
            )
        if sum(expo) < 2:
            raise SystemFileError(
                f"{where}: exponent degree {sum(expo)} < 2; constant and linear "
                "terms belong to the eigen data"
            )
        coeff = _scalar_field(_field(term, "coeff", list, where), where, scalars)
        max_deg = max(max_deg, sum(expo))
        triples.append((j - 1, tuple(expo), coeff))
    nonlinear = VectorSeries.from_terms(n, max_deg, triples).with_trunc(max(order, max_deg))
    return SystemFile(
        kind=kind, n=n, scalars=scalars, eigen=eigen, nonlinear=nonlinear,
        lattice_bound=lattice_bound, order=order,
    )


# -- serialization ------------------------------------------------------------------


def _scalar_series_json(s: ScalarSeries) -> list:
    return [
        {"exponent": list(m), "coeff": scalar_to_json(c)} for m, c in s.terms()
    ]


def _vector_series_json(v: VectorSeries) -> list:
    out = []
    for j, comp in enumerate(v.components):
        for m, c in comp.terms():
            out.append(
                {"component": j + 1, "exponent": list(m), "coeff": scalar_to_json(c)}
            )
    return out


def _eigen_json(spec: EigenSpec) -> dict:
    if spec.kind == "mult-base":
        return {
            "form": "mult-base",
            "exponents": [[a.numerator, a.denominator] for a in spec.exponents],
            "phases": [[b.numerator, b.denominator] for b in spec.phases],
        }
    return {
        "form": "additive" if spec.kind == "additive" else "mult-rational",
        "values": [scalar_to_json(v) for v in spec.values],
    }


def _system_json(sf: SystemFile) -> dict:
    return {
        "kind": sf.kind,
        "n": sf.n,
        "scalars": sf.scalars,
        "eigen": _eigen_json(sf.eigen),
        "terms": _vector_series_json(sf.nonlinear),
        "degree_D": sf.lattice_bound,
        "order_N": sf.order,
    }


def _lattice_json(basis: LatticeBasis) -> dict:
    return {
        "kind": basis.kind,
        "bound": basis.bound,
        "rank": basis.rank,
        "generators": [list(g) for g in basis.generators],
        "non_simple_generators": [list(g) for g in basis.non_simple],
        "span_deficit": basis.span_deficit,
        "resonant_exponents": [list(m) for m in basis.exponents],
    }


def _bound_value_json(value) -> dict:
    if isinstance(value, Fraction):
        return {"type": "rational", "value": [value.numerator, value.denominator]}
    if isinstance(value, RootValue):
        return {
            "type": "sqrt",
            "square": [value.square.numerator, value.square.denominator],
        }
    assert isinstance(value, SymbolicBound)
    return {
        "type": "symbolic",
        "base": None if value.beta is None
        else [value.beta.numerator, value.beta.denominator],
        "terms": [
            {
                "beta_exponent": [t.beta_exp.numerator, t.beta_exp.denominator],
                "kind": t.kind,
                "parameter": [t.param.numerator, t.param.denominator],
            }
            for t in value.terms
        ],
        "description": value.describe(),
    }


def _bound_json(bound: SmallDivisorBound, verification) -> dict:
    cert = {}
    for key, val in bound.certificate.items():
        if isinstance(val, Fraction):
            cert[key] = [val.numerator, val.denominator]
        elif isinstance(val, tuple):
            cert[key] = [
                [x.numerator, x.denominator] if isinstance(x, Fraction) else x
                for x in val
            ]
        elif isinstance(val, dict):
            cert[key] = {str(k): list(v) for k, v in val.items()}
        elif hasattr(val, "describe"):
            cert[key] = val.describe()
        else:
            cert[key] = val
    out = {
        "kind": "sigma" if bound.kind == "map" else "kappa",
        "value": _bound_value_json(bound.value),
        "certificate": cert,
    }
    if verification is not None:
        out["verification"] = {
            "mode": verification.mode,
            "passed": verification.passed,
            "pairs_checked": verification.checked,
            "min_gap": None if verification.min_gap is None
            else _bound_value_json(verification.min_gap),
            "witness": None if verification.witness is None
            else {"exponent": list(verification.witness[0]),
                  "component": verification.witness[1] + 1},
            "failure": None if verification.failure is None
            else {"exponent": list(verification.failure[0]),
                  "component": verification.failure[1] + 1},
        }
    return out


def _normalization_json(result: NormalizationResult) -> dict:
    return {
        "phi": _vector_series_json(result.phi),
        "g": _vector_series_json(result.g),
        "order": result.order,
        "residual_zero_through": result.order if result.residual_zero_degrees else None,
    }


def _growth_json(growth) -> Optional[dict]:
    if growth is None:
        return None
    return {
        "table": [
            [s, [mag.numerator, mag.denominator]] for s, mag in growth.rows
        ],
        "log_slope": None if growth.slope is None else f"{growth.slope:.6f}",
        "ratio": None if growth.ratio is None else f"{growth.ratio:.6f}",
        "super_geometric": growth.super_geometric,
    }


def _classification_json(report: IntegrabilityReport) -> dict:
    out = {
        "verdict": report.verdict,
        "certified_at": {"degree_D": report.lattice_bound, "order_N": report.order},
        "note": (
            "the verdict certifies formal conjugacy through order_N and the "
            "lattice rank through degree_D; analyticity of the transformation "
            "is not decidable on truncations (see the growth diagnostic)"
        ),
        "witness": report.witness,
        "flags": list(report.flags),
        "rank_ok": report.rank_ok,
    }
    if report.lattice is not None:
        out["lattice"] = _lattice_json(report.lattice)
    if report.normalization is not None:
        out["normalization"] = _normalization_json(report.normalization)
    if report.shape is not None:
        out["shape"] = {
            "ok": report.shape.ok,
            "witness": None if report.shape.witness is None else {
                "component": report.shape.witness[0] + 1,
                "exponent": list(report.shape.witness[1]),
            },
        }
    if report.p is not None:
        out["p"] = [_scalar_series_json(p) for p in report.p]
    if report.h is not None:
        out["h"] = _scalar_series_json(report.h)
    if report.functional_residuals is not None:
        out["functional_equation_residuals_zero"] = [
            r.is_zero() for r in report.functional_residuals
        ]
    if report.reduction is not None:
        out["single_function_reduction"] = {
            "base_component": report.reduction.iota + 1,
            "exponents": [
                [r.numerator, r.denominator] for r in report.reduction.exponents
            ],
            "verified_order": report.reduction.verified_order,
        }
    if report.growth is not None:
        out["growth"] = _growth_json(report.growth)
    return out


# -- subcommand runners ---------------------------------------------------------------


def _run_resonance(sf: SystemFile, D: int) -> dict:
    basis = enumerate_lattice(sf.eigen, D)
    section = {"lattice": _lattice_json(basis)}
    flags = []
    if basis.non_simple:
        flags.append("some generators are not simple (no simple element on their ray)")
    n = sf.n
    if basis.rank == n - 1 and len(basis.generators) == n - 1:
        try:
            if sf.kind == "map":
                bound = small_divisor_bound_map(sf.eigen, basis)
            else:
                bound = small_divisor_bound_field(sf.eigen, basis)
            verification = verify_bound(sf.eigen, bound, D)
            if not verification.passed:
                raise InternalInvariantError(
                    f"small-divisor bound violated at {verification.failure}"
                )
            section["bound"] = _bound_json(bound, verification)
            if bound.certificate.get("phase_group_order", 1) > 1:
                flags.append(
                    "phase set is nontrivial: the gap uses the full cyclic group "
                    "generated by the phases"
                )
        except HypothesisError as exc:
            section["bound"] = {"status": "not-applicable", "reason": str(exc)}
    else:
        section["bound"] = {
            "status": "not-applicable",
            "reason": f"lattice rank {basis.rank} is not n-1 = {n - 1} at degree {D}",
        }
    section["flags"] = flags
    return section


def _run_normalize(sf: SystemFile, N: int) -> dict:
    system = sf.system()
    result = (
        normalize_map(system, N) if sf.kind == "map" else normalize_field(system, N)
    )
    growth = growth_diagnostic(result.phi)
    return {
        "normalization": _normalization_json(result),
        "growth": _growth_json(growth),
    }


def _run_classify(sf: SystemFile, D: int, N: int) -> dict:
    report = classify(sf.system(), D, N)
    return {"classification": _classification_json(report)}


def _integral_set_json(vs, residual_zero: list[bool], cert=None) -> dict:
    out = {
        "integrals": [_scalar_series_json(v) for v in vs],
        "residual_zero": residual_zero,
    }
    if cert is not None:
        out["independence"] = {
            "independent": cert.independent,
            "rank_found": cert.rank_found,
            "witness_point": None if cert.witness is None
            else [scalar_to_json(x) for x in cert.witness],
            "trials": cert.trials,
        }
    return out


def _run_integrals(sf: SystemFile, D: int, N: int, seed: int) -> dict:
    system = sf.system()
    if sf.kind == "map":
        found = search_integrals_map(system, N)
        residuals = [verify_integral_map(v, system, N).is_zero() for v in found]
    else:
        found = search_integrals_field(system, N)
        residuals = [verify_integral_field(v, system, N).is_zero() for v in found]
    cert = (
        independence_check(found, trials=DEFAULT_TRIALS, seed=seed) if len(found) else None
    )
    section = {"search": _integral_set_json(found, residuals, cert)}
    basis = enumerate_lattice(sf.eigen, D)
    if basis.generators and sf.eigen.has_exact_values():
        result = (
            normalize_map(system, N) if sf.kind == "map" else normalize_field(system, N)
        )
        monomials = monomial_integrals(basis, trunc=N)
        pulled = pullback_integrals(monomials, result.phi, N)
        if sf.kind == "map":
            pres = [verify_integral_map(v, system, N).is_zero() for v in pulled]
        else:
            pres = [verify_integral_field(v, system, N).is_zero() for v in pulled]
        pcert = independence_check(pulled, trials=DEFAULT_TRIALS, seed=seed)
        section["pullback"] = _integral_set_json(pulled, pres, pcert)
        section["pullback"]["generators"] = [list(g) for g in basis.generators]
    return {"integrals": section}


def _run_embed(sf: SystemFile, D: int, N: int) -> dict:
    if sf.kind != "map":
        raise HypothesisError("the embedding construction applies to maps")
    system = sf.system()
    report = classify(system, D, N)
    if report.verdict != "integrable-consistent":
        raise HypothesisError(
            f"embedding needs an integrable map; classification says "
            f"'{report.verdict}'"
            + (f" ({report.witness})" if report.witness else "")
        )
    basis = report.lattice
    monomials = monomial_integrals(basis, trunc=N)
    pulled = pullback_integrals(monomials, report.normalization.phi, N)
    emb = embedding_field(system, pulled, N - 1)
    flags = list(emb.flags)
    phi_one = time_one_map(emb.field, TIME_ONE_TERMS, emb.order)
    time_one_matches = phi_one == system.full_map(emb.order).truncate(emb.order)
    if not time_one_matches:
        flags.append(
            "the truncated time-one map of the field differs from the map: the "
            "construction certifies DF*X = X(F), not that F is the time-one flow"
        )
    return {
        "embedding": {
            "field": _vector_series_json(emb.field),
            "order": emb.order,
            "integrals": [_scalar_series_json(v) for v in pulled],
            "tangency_zero": [r.is_zero() for r in emb.tangency_residuals],
            "equivariance_zero": emb.equivariance_residual.is_zero(),
            "time_one_matches_map": time_one_matches,
            "time_one_terms": TIME_ONE_TERMS,
            "flags": flags,
        }
    }


# -- verify (report re-checking) ---------------------------------------------------


def _series_from_json(terms, n: int, trunc: int) -> ScalarSeries:
    coeffs = {}
    for t in terms:
        coeffs[tuple(t["exponent"])] = scalar_from_json(t["coeff"])
    degs = [sum(m) for m in coeffs]
    return ScalarSeries(n, max([trunc] + degs), coeffs)


def _vector_from_json(terms, n: int, trunc: int) -> VectorSeries:
    triples = []
    for t in terms:
        triples.append((t["component"] - 1, tuple(t["exponent"]), scalar_from_json(t["coeff"])))
    degs = [sum(m) for _, m, _ in triples]
    return VectorSeries.from_terms(n, max([trunc] + degs), triples)


def _system_from_echo(doc: dict) -> SystemFile:
    import tempfile, os

    with tempfile.NamedTemporaryFile(
        "w", suffix=".json", delete=False, encoding="utf-8"
    ) as fh:
        json.dump(doc, fh)
        path = fh.name
    try:
        return parse_system(path)
    finally:
        os.unlink(path)


def _run_verify(report_path: str) -> dict:
    doc = _load_json(report_path)
    if not isinstance(doc, dict) or "system" not in doc:
        raise SystemFileError(f"{report_path}: not a report file (no system echo)")
    sf = _system_from_echo(doc["system"])
    system = sf.system()
    checked = []

    def fail(what: str):
        raise InternalInvariantError(f"verification failed: {what}")

    norm_doc = None
    for key in ("normalization",):
        if key in doc:
            norm_doc = doc[key]
    if norm_doc is None and "classification" in doc:
        norm_doc = doc["classification"].get("normalization")
    if norm_doc is not None:
        order = norm_doc["order"]
        phi = _vector_from_json(norm_doc["phi"], sf.n, order)
        g = _vector_from_json(norm_doc["g"], sf.n, order)
        result = NormalizationResult(spec=sf.eigen, phi=phi, g=g, order=order)
        residual = (
            verify_conjugacy_map(system, result)
            if sf.kind == "map"
            else verify_conjugacy_field(system, result)
        )
        if not residual.is_zero():
            bad = min(sum(m) for comp in residual.components for m in comp.coeffs)
            fail(f"conjugacy residual is nonzero at degree {bad}")
        for j, comp in enumerate(phi.components):
            for m in comp.coeffs:
                if transformation_resonant(sf.eigen, m, j):
                    fail(f"phi carries resonant monomial {m} in component {j + 1}")
        for j, comp in enumerate(g.components):
            for m in comp.coeffs:
                if not transformation_resonant(sf.eigen, m, j):
                    fail(f"g carries nonresonant monomial {m} in component {j + 1}")
        checked.append("normalization")
    if "classification" in doc:
        cls = doc["classification"]
        if cls.get("verdict") == "integrable-consistent" and cls.get("p") is not None:
            order = cls["normalization"]["order"]
            p = [
                _series_from_json(terms, sf.n, order - 1) for terms in cls["p"]
            ]
            basis = enumerate_lattice(sf.eigen, cls["certified_at"]["degree_D"])
            residuals = check_functional_equations(p, basis, order - 1)
            if not all(r.is_zero() for r in residuals):
                fail("functional-equation residual is nonzero")
            checked.append("functional-equations")
    if isinstance(doc.get("integrals"), dict):
        for name, sec in doc["integrals"].items():
            if not isinstance(sec, dict) or "integrals" not in sec:
                continue
            for terms in sec["integrals"]:
                V = _series_from_json(terms, sf.n, sf.order)
                residual = (
                    verify_integral_map(V, system, sf.order)
                    if sf.kind == "map"
                    else verify_integral_field(V, system, sf.order)
                )
                claimed = sec.get("residual_zero")
                if claimed and all(claimed) and not residual.is_zero():
                    fail(f"integral in section '{name}' is not invariant")
            checked.append(f"integrals:{name}")
    if "embedding" in doc:
        emb = doc["embedding"]
        order = emb["order"]
        X = _vector_from_json(emb["field"], sf.n, order)
        vs = [_series_from_json(t, sf.n, order + 1) for t in emb["integrals"]]
        from .series import gradient, scalar_inner

        for V in vs:
            if not scalar_inner(gradient(V), X, order).is_zero():
                fail("embedding field is not tangent to an integral level set")
        if emb.get("equivariance_zero"):
            if not verify_equivariance(system, X, order).is_zero():
                fail("claimed equivariance does not hold")
        checked.append("embedding")
    if "lattice" in doc:
        basis = enumerate_lattice(sf.eigen, doc["lattice"]["bound"])
        if [list(g) for g in basis.generators] != doc["lattice"]["generators"]:
            fail("lattice generators do not match a recomputation")
        if basis.rank != doc["lattice"]["rank"]:
            fail("lattice rank does not match a recomputation")
        checked.append("lattice")
        bound_doc = doc.get("bound")
        if isinstance(bound_doc, dict) and "value" in bound_doc:
            bound = (
                small_divisor_bound_map(sf.eigen, basis)
                if sf.kind == "map"
                else small_divisor_bound_field(sf.eigen, basis)
            )
            if _bound_value_json(bound.value) != bound_doc["value"]:
                fail("small-divisor bound value does not match a recomputation")
            ver = verify_bound(sf.eigen, bound, doc["lattice"]["bound"])
            if not ver.passed:
                fail(f"small-divisor bound violated at {ver.failure}")
            checked.append("bound")
    if not checked:
        raise SystemFileError(
            f"{report_path}: nothing to verify (no recognized sections)"
        )
    return {"verify": {"checked": checked, "all_zero": True}}


# -- rendering ---------------------------------------------------------------------


def _fmt_value(doc: dict) -> str:
    if doc["type"] == "rational":
        n, d = doc["value"]
        return f"{n}/{d}" if d != 1 else str(n)
    if doc["type"] == "sqrt":
        n, d = doc["square"]
        return f"sqrt({n}/{d})" if d != 1 else f"sqrt({n})"
    return doc["description"]


def _fmt_terms(terms: list) -> str:
    if not terms:
        return "0"
    bits = []
    for t in terms:
        c = t["coeff"]
        cs = f"{c[0]}/{c[1]}" if c[1] != 1 else str(c[0])
        if len(c) == 4:
            cs = f"({c[0]}/{c[1]}{'+' if c[2] >= 0 else '-'}{abs(c[2])}/{c[3]}i)"
        mono = "*".join(
            f"y{i + 1}" + (f"^{e}" if e > 1 else "")
            for i, e in enumerate(t["exponent"])
            if e
        )
        comp = f"e{t['component']}" if "component" in t else ""
        bits.append(f"{cs}*{mono}{comp}" if mono else f"{cs}{comp}")
    return " + ".join(bits)


def _render_text(report: dict, out) -> None:
    def emit(line=""):
        print(line, file=out)

    emit(f"dulac {report['tool']['version']} - {report['subcommand']}")
    params = report.get("parameters", {})
    if params:
        emit("parameters: " + ", ".join(f"{k}={v}" for k, v in sorted(params.items())))
    if "lattice" in report:
        lat = report["lattice"]
        emit()
        emit(f"resonant lattice (degree <= {lat['bound']}): rank {lat['rank']}")
        emit(f"  generators: {lat['generators']}")
        emit(f"  resonant exponents found: {len(lat['resonant_exponents'])}")
        if lat["non_simple_generators"]:
            emit(f"  non-simple generators: {lat['non_simple_generators']}")
    if "bound" in report:
        b = report["bound"]
        emit()
        if "status" in b:
            emit(f"small-divisor bound: {b['status']} ({b['reason']})")
        else:
            emit(f"small-divisor bound {b['kind']} = {_fmt_value(b['value'])}")
            ver = b.get("verification")
            if ver:
                emit(
                    f"  verification: {'pass' if ver['passed'] else 'FAIL'} "
                    f"({ver['mode']}, {ver['pairs_checked']} pairs)"
                    + (
                        f", minimum gap {_fmt_value(ver['min_gap'])} at "
                        f"{ver['witness']}"
                        if ver.get("min_gap")
                        else ""
                    )
                )
    if "normalization" in report:
        norm = report["normalization"]
        emit()
        emit(f"normalization solved through degree {norm['order']}")
        emit(f"  phi = {_fmt_terms(norm['phi'])}")
        emit(f"  g   = {_fmt_terms(norm['g'])}")
        emit(f"  conjugacy residual exactly zero through degree "
             f"{norm['residual_zero_through']}")
    if "classification" in report:
        cls = report["classification"]
        emit()
        emit(f"verdict: {cls['verdict']} "
             f"(certified at D={cls['certified_at']['degree_D']}, "
             f"N={cls['certified_at']['order_N']})")
        if cls.get("witness"):
            emit(f"  witness: {cls['witness']}")
        if cls.get("lattice"):
            emit(f"  lattice rank {cls['lattice']['rank']} with generators "
                 f"{cls['lattice']['generators']}")
        if cls.get("normalization"):
            norm = cls["normalization"]
            emit(f"  phi has {len(norm['phi'])} terms, g has {len(norm['g'])} terms; "
                 f"conjugacy residual exactly zero through degree "
                 f"{norm['residual_zero_through']}")
        if cls.get("functional_equation_residuals_zero") is not None:
            emit(f"  functional-equation residuals zero: "
                 f"{all(cls['functional_equation_residuals_zero'])}")
        if cls.get("h") is not None:
            emit(f"  common factor h = {_fmt_terms(cls['h'])}")
        if cls.get("single_function_reduction"):
            red = cls["single_function_reduction"]
            exps = ", ".join(f"{n}/{d}" if d != 1 else str(n) for n, d in red["exponents"])
            emit(f"  unit powers of base component {red['base_component']}: ({exps})")
    if "integrals" in report:
        ints = report["integrals"]
        emit()
        for name in ("search", "pullback"):
            if name not in ints:
                continue
            sec = ints[name]
            emit(f"{name}: {len(sec['integrals'])} integrals, residuals zero: "
                 f"{all(sec['residual_zero']) if sec['residual_zero'] else 'n/a'}")
            for terms in sec["integrals"]:
                emit(f"  {_fmt_terms(terms)}")
            ind = sec.get("independence")
            if ind:
                emit(f"  independence: "
                     f"{'certified' if ind['independent'] else 'not certified'} "
                     f"(rank {ind['rank_found']}, trials {ind['trials']})")
    if "embedding" in report:
        emb = report["embedding"]
        emit()
        emit(f"embedding field (degree {emb['order']}): {_fmt_terms(emb['field'])}")
        emit(f"  tangency residuals zero: {all(emb['tangency_zero'])}")
        emit(f"  intertwining DF*X - X(F) zero: {emb['equivariance_zero']}")
        emit(f"  time-one map matches the map: {emb['time_one_matches_map']}")
    if "verify" in report:
        emit()
        emit(f"verified sections: {', '.join(report['verify']['checked'])}")
        emit("all exact claims reproduced")
    for flags_holder in (report, report.get("classification", {}),
                         report.get("embedding", {})):
        if isinstance(flags_holder, dict) and flags_holder.get("flags"):
            emit()
            for flag in flags_holder["flags"]:
                emit(f"note: {flag}")
    if "growth" in report and report["growth"]:
        g = report["growth"]
        emit()
        emit(f"growth diagnostic (advisory): slope {g['log_slope']}, "
             f"ratio {g['ratio']}, super-geometric: {g['super_geometric']}")


def _emit(report: dict, args) -> None:
    text = (
        json.dumps(report, indent=2, sort_keys=True) + "\n"
        if args.format == "json"
        else None
    )
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            if args.format == "json":
                fh.write(text)
            else:
                _render_text(report, fh)
    else:
        if args.format == "json":
            sys.stdout.write(text)
        else:
            _render_text(report, sys.stdout)


# -- entry point --------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dulac",
        description=(
            "Exact normal forms, resonant lattices, integrability verdicts, "
            "first integrals and embedding fields for local maps and vector "
            "fields. All computations are exact; reports are deterministic."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("resonance", "resonant lattice, rank, and small-divisor bound"),
        ("normalize", "distinguished normalization and normal form"),
        ("classify", "integrability verdict certified at (D, N)"),
        ("integrals", "search, pull back, and verify first integrals"),
        ("embed", "cross-product embedding field with verification"),
        ("verify", "re-check the exact claims of an emitted report"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="system file (or report for verify)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--degree", type=int, help="lattice enumeration bound D")
        p.add_argument("--order", type=int, help="normalization order N")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0, help="independence sampling seed")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.subcommand == "verify":
            body = _run_verify(args.input)
            sf = None
            params = {}
        else:
            sf = parse_system(args.input)
            D = args.degree if args.degree is not None else sf.lattice_bound
            N = args.order if args.order is not None else sf.order
            params = {"degree_D": D, "order_N": N, "seed": args.seed}
            if args.subcommand == "resonance":
                body = _run_resonance(sf, D)
            elif args.subcommand == "normalize":
                body = _run_normalize(sf, N)
            elif args.subcommand == "classify":
                body = _run_classify(sf, D, N)
            elif args.subcommand == "integrals":
                body = _run_integrals(sf, D, N, args.seed)
            else:
                body = _run_embed(sf, D, N)
        report = {
            "tool": {"name": "dulac", "version": __version__},
            "subcommand": args.subcommand,
        }
        if params:
            report["parameters"] = params
        if sf is not None:
            report["system"] = _system_json(sf)
        report.update(body)
        _emit(report, args)
        return 0
    except SystemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InternalInvariantError, SeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
