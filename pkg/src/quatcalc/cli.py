"""Command-line front end.

One JSON document goes in (stdin or ``--input``), one comes out (stdout or
``--output``).  Complex numbers are always two-field records ``{"re": x,
"im": y}``, quaternions are four-element real arrays ``[x0, x1, x2, x3]``
along (I, J, K, L), and matrices are row-major nested arrays.  Outputs echo
the parsed inputs, so a run is reproducible from its own output; identical
inputs produce identical output bytes.

Exit codes: 0 success, 1 parse error, 2 domain/geometry/contract error,
3 accuracy error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import (
    AccuracyError,
    AffineArg,
    CommutingPair,
    ContractViolationError,
    Cos,
    DomainError,
    EntrywiseFunction,
    Exp,
    GeometryError,
    InvalidArgumentError,
    MatrixCoefficientFunction,
    NumericError,
    PairStem,
    Polynomial,
    Product,
    QuadratureConfig,
    QuaternionPolynomial,
    ScalarStem,
    SeparableProduct,
    Sin,
    SingularElementError,
    SliceSampleGrid,
    SphereGrid,
    Sum,
    SymmetricDomain,
    TwoVariablePolynomial,
    build_contour,
    cauchy_derivative,
    complex_spectrum,
    discrete_mult_op,
    dist_to_quaternions,
    enclosing_sphere_grid,
    eval_spectral,
    joint_resolvent_margin,
    joint_spectrum_points,
    make_quaternion,
    martinelli_calculus,
    op_calculus,
    slice_regularity_report,
    spectral_evaluator,
    spectrum,
    verify_stem,
    zero_set_contains,
)

_SUBCOMMANDS = (
    "spectrum",
    "eval",
    "deriv",
    "stem-check",
    "slice-check",
    "zeros",
    "op-spectrum",
    "op-calc",
    "mult-op",
    "joint-spectrum",
    "joint-calc",
)


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# encoding / decoding


def _c_out(z):
    z = complex(z)
    return {"im": z.imag, "re": z.real}


def _c_in(doc):
    try:
        return complex(float(doc["re"]), float(doc["im"]))
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError(f"expected a complex record {{re, im}}, got {doc!r}") from exc


def _mat_out(a):
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return [[_c_out(v) for v in row] for row in a.tolist()]
    return [[float(v) for v in row] for row in a.tolist()]


def _quat_in(doc):
    try:
        x0, x1, x2, x3 = (float(v) for v in doc)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected a quaternion [x0, x1, x2, x3], got {doc!r}") from exc
    return make_quaternion(x0, x1, x2, x3)


def _quat_out(q):
    return [q.components[0], q.components[1], q.components[2], q.components[3]]


def _real_matrix_in(doc):
    try:
        m = np.asarray(doc, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected a real matrix, got {doc!r}") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParseError("matrix must be square")
    return m


def _scalar_in(doc):
    try:
        kind = doc["kind"]
    except (TypeError, KeyError) as exc:
        raise ParseError(f"scalar function needs a 'kind', got {doc!r}") from exc
    if kind == "poly":
        return Polynomial([_c_in(c) for c in doc["coeffs"]])
    if kind == "exp":
        return Exp()
    if kind == "sin":
        return Sin()
    if kind == "cos":
        return Cos()
    if kind == "affine":
        return AffineArg(_c_in(doc["scale"]), _c_in(doc["shift"]), _scalar_in(doc["body"]))
    if kind == "sum":
        return Sum(*(_scalar_in(p) for p in doc["parts"]))
    if kind == "product":
        return Product(*(_scalar_in(p) for p in doc["parts"]))
    raise ParseError(f"unknown scalar function kind {kind!r}")


def _domain_in(doc):
    if doc is None:
        return None
    try:
        return SymmetricDomain([(_c_in(d["center"]), float(d["radius"])) for d in doc])
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError(f"bad domain specification {doc!r}") from exc


def _stem_in(doc, domain=None):
    try:
        kind = doc["kind"]
    except (TypeError, KeyError) as exc:
        raise ParseError(f"matrix function needs a 'kind', got {doc!r}") from exc
    if kind == "scalar":
        return ScalarStem(_scalar_in(doc["f"]), domain=domain)
    if kind == "pair":
        return PairStem(_scalar_in(doc["f1"]), _scalar_in(doc["f2"]), domain=domain)
    if kind == "hpoly":
        return QuaternionPolynomial([_quat_in(c) for c in doc["coeffs"]], domain=domain)
    if kind == "entries":
        rows = doc["entries"]
        return EntrywiseFunction(
            [[_scalar_in(rows[0][0]), _scalar_in(rows[0][1])],
             [_scalar_in(rows[1][0]), _scalar_in(rows[1][1])]],
            domain=domain,
        )
    raise ParseError(f"unknown matrix function kind {kind!r}")


def _operator_function_in(doc, dim):
    try:
        kind = doc["kind"]
    except (TypeError, KeyError) as exc:
        raise ParseError(f"operator function needs a 'kind', got {doc!r}") from exc
    if kind == "op-poly":
        mats = [_real_matrix_in(m) for m in doc["coeffs"]]
        F = MatrixCoefficientFunction.from_polynomial(mats)
    elif kind == "op-scalar":
        F = MatrixCoefficientFunction.from_scalar(_scalar_in(doc["f"]), dim)
    elif kind == "op-terms":
        F = MatrixCoefficientFunction(
            [(_real_matrix_in(t["matrix"]), _scalar_in(t["scalar"])) for t in doc["terms"]]
        )
    else:
        raise ParseError(f"unknown operator function kind {kind!r}")
    if F.dim != dim:
        raise ParseError(f"operator function dimension {F.dim} does not match matrix {dim}")
    return F


def _two_variable_in(doc):
    try:
        kind = doc["kind"]
    except (TypeError, KeyError) as exc:
        raise ParseError(f"two-variable function needs a 'kind', got {doc!r}") from exc
    if kind == "poly2":
        return TwoVariablePolynomial([[_c_in(c) for c in row] for row in doc["coeffs"]])
    if kind == "separable":
        return SeparableProduct(_scalar_in(doc["g"]), _scalar_in(doc["h"]))
    raise ParseError(f"unknown two-variable function kind {kind!r}")


def _quadrature_config(args):
    return QuadratureConfig(nodes_per_circle=args.nodes, rel_tol=args.tol)


def _default_domain_for(q):
    return SymmetricDomain.disk(0.0, max(2.0, 4.0 * q.norm() + 1.0))


# ---------------------------------------------------------------------------
# subcommand handlers (each returns the "result" sub-document)


def _run_spectrum(doc, args):
    q = _quat_in(doc["quaternion"])
    sp = spectrum(q)
    return {
        "eigenvectors": {
            "nu_minus": [_c_out(v) for v in sp.nu_minus],
            "nu_plus": [_c_out(v) for v in sp.nu_plus],
        },
        "s_minus": _c_out(sp.s_minus),
        "s_plus": _c_out(sp.s_plus),
    }


def _eval_common(doc, args, order):
    q = _quat_in(doc["quaternion"])
    domain = _domain_in(doc.get("domain"))
    F = _stem_in(doc["function"], domain=domain)
    method = doc.get("method", "contour")
    if method not in ("contour", "spectral"):
        raise ParseError(f"unknown method {method!r}")
    result = {"method": method, "order": order}
    if method == "spectral":
        G = F
        for _ in range(order):
            G = G.derivative()
        value = eval_spectral(G, q)
        diagnostics = {}
    else:
        sp = spectrum(q)
        dom = domain if domain is not None else _default_domain_for(q)
        gamma = build_contour([sp.s_plus, sp.s_minus], dom, args.margin)
        value, diag = cauchy_derivative(
            F, order, q, gamma, _quadrature_config(args), return_diagnostics=True
        )
        diagnostics = {
            "converged": diag.converged,
            "est_error": diag.est_error,
            "nodes_per_circle": diag.nodes_per_circle,
        }
        if args.emit_samples:
            result["samples"] = {
                "circles": [
                    {"center": _c_out(c.center), "radius": c.radius} for c in gamma.circles
                ]
            }
    result["value"] = _mat_out(value)
    result["dist_to_quaternions"] = dist_to_quaternions(value)
    result["diagnostics"] = diagnostics
    return result


def _run_eval(doc, args):
    return _eval_common(doc, args, 0)


def _run_deriv(doc, args):
    order = int(doc.get("order", 1))
    if order < 0:
        raise ParseError("order must be >= 0")
    return _eval_common(doc, args, order)


def _run_stem_check(doc, args):
    domain = _domain_in(doc.get("domain"))
    F = _stem_in(doc["function"], domain=domain)
    samples = None
    if "samples" in doc:
        samples = [_c_in(c) for c in doc["samples"]]
    report = verify_stem(F, samples=samples, tol=args.tol)
    out = {
        "max_defect": report.max_defect,
        "passed": report.passed,
        "witness": _c_out(report.witness),
    }
    if args.emit_samples:
        used = samples if samples is not None else None
        if used is None:
            from .func_model import conjugate_sample_pairs

            used = conjugate_sample_pairs(F.domain)
        out["samples"] = [_c_out(z) for z in used]
    return out


def _run_slice_check(doc, args):
    fdoc = doc["function"]
    if isinstance(fdoc, dict) and fdoc.get("kind") == "star-involution":
        def G(q):
            return q.star()
    else:
        G = spectral_evaluator(_stem_in(fdoc))
    grid_doc = doc.get("grid", {})
    domain = _domain_in(grid_doc.get("domain")) or SymmetricDomain.disk(0.0, 2.0)
    grid = SliceSampleGrid.random(
        domain,
        int(grid_doc.get("points", 200)),
        int(grid_doc.get("directions", 5)),
        h=args.fd_step,
        seed=int(grid_doc.get("seed", 0)),
    )
    report = slice_regularity_report(G, grid, tol=args.tol)
    x, y, s = report.worst_point
    out = {
        "max_defect": report.max_defect,
        "passed": report.passed,
        "worst_point": {"direction": _quat_out(s), "x": x, "y": y},
    }
    if args.emit_samples:
        out["samples"] = [{"direction": _quat_out(s), "x": x, "y": y} for x, y, s in grid.points]
    return out


def _run_zeros(doc, args):
    q = _quat_in(doc["quaternion"])
    F = _stem_in(doc["function"], domain=_domain_in(doc.get("domain")))
    sp = spectrum(q)
    return {
        "contains": zero_set_contains(F, q, tol=args.tol),
        "value_at_s_minus": _mat_out(F(sp.s_minus)),
        "value_at_s_plus": _mat_out(F(sp.s_plus)),
    }


def _run_op_spectrum(doc, args):
    T = _real_matrix_in(doc["matrix"])
    report = complex_spectrum(T)
    return {
        "eigenvalues": [_c_out(v) for v in report.eigenvalues],
        "pairs": [{"multiplicity": m, "value": _c_out(v)} for v, m in report.pairs],
    }


def _run_op_calc(doc, args):
    T = _real_matrix_in(doc["matrix"])
    F = _operator_function_in(doc["function"], T.shape[0])
    value, diag, flat_defect = op_calculus(
        F, T, cfg=_quadrature_config(args), return_diagnostics=True
    )
    return {
        "diagnostics": {
            "converged": diag.converged,
            "est_error": diag.est_error,
            "flat_defect": flat_defect,
            "nodes_per_circle": diag.nodes_per_circle,
        },
        "value": _mat_out(value),
    }


def _run_mult_op(doc, args):
    quats = [_quat_in(c) for c in doc["quaternions"]]
    T = discrete_mult_op(quats)
    report = complex_spectrum(T, cap=max(64, T.shape[0]))
    return {
        "dimension": T.shape[0],
        "eigenvalue_pairs": [{"multiplicity": m, "value": _c_out(v)} for v, m in report.pairs],
        "matrix": _mat_out(T),
    }


def _run_joint_spectrum(doc, args):
    pair = CommutingPair(_real_matrix_in(doc["matrix1"]), _real_matrix_in(doc["matrix2"]))
    points = joint_spectrum_points(pair)
    return {
        "points": [
            {
                "margin": joint_resolvent_margin(pair, p),
                "z1": _c_out(p[0]),
                "z2": _c_out(p[1]),
            }
            for p in points
        ]
    }


def _run_joint_calc(doc, args):
    pair = CommutingPair(_real_matrix_in(doc["matrix1"]), _real_matrix_in(doc["matrix2"]))
    f = _two_variable_in(doc["function"])
    if "sphere" in doc:
        sphere = doc["sphere"]
        grid = SphereGrid(
            (float(sphere["center"][0]), float(sphere["center"][1])),
            float(sphere["radius"]),
            args.grid_res,
        )
    else:
        grid = enclosing_sphere_grid(pair, resolution=args.grid_res, margin=args.margin)
    value, diagnostics = martinelli_calculus(f, pair, grid, return_diagnostics=True)
    return {
        "diagnostics": diagnostics,
        "sphere": {"center": [grid.center[0], grid.center[1]], "radius": grid.radius},
        "value": _mat_out(value),
    }


_HANDLERS = {
    "spectrum": _run_spectrum,
    "eval": _run_eval,
    "deriv": _run_deriv,
    "stem-check": _run_stem_check,
    "slice-check": _run_slice_check,
    "zeros": _run_zeros,
    "op-spectrum": _run_op_spectrum,
    "op-calc": _run_op_calc,
    "mult-op": _run_mult_op,
    "joint-spectrum": _run_joint_spectrum,
    "joint-calc": _run_joint_calc,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quatcalc",
        description="Quaternionic spectra and analytic functional calculus.",
    )
    parser.add_argument("command", choices=_SUBCOMMANDS)
    parser.add_argument("--input", help="input JSON document (default: stdin)")
    parser.add_argument("--output", help="output path (default: stdout)")
    parser.add_argument("--tol", type=float, default=1e-10, help="tolerance / check threshold")
    parser.add_argument("--nodes", type=int, default=1024, help="starting quadrature nodes per circle")
    parser.add_argument("--fd-step", type=float, default=1e-4, help="finite-difference step")
    parser.add_argument("--grid-res", type=int, default=48, help="sphere grid resolution per angle")
    parser.add_argument("--margin", type=float, default=0.25, help="contour/sphere clearance margin")
    parser.add_argument(
        "--emit-samples", action="store_true", help="include evaluation grids in the output"
    )
    return parser


def run(argv):
    """Parse, dispatch, and write one job; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.input:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        doc = json.loads(text)
        if not isinstance(doc, dict):
            raise ParseError("top-level document must be an object")
    except (OSError, json.JSONDecodeError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1

    handler = _HANDLERS[args.command]
    try:
        result = handler(doc, args)
    except (ParseError, KeyError, TypeError, InvalidArgumentError, SingularElementError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, GeometryError, ContractViolationError, NumericError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return 3

    out_doc = {"command": args.command, "inputs": doc, "result": result}
    payload = json.dumps(out_doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def main():
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
