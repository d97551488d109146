import argparse
from typing import Any, Dict, List, Optional, Tuple

from adapters.documents import DocumentError, algebra_to_data, load_location, qp_to_data
from adapters.dot import emit_dot
from algebra.normalform import (
    complete_groebner,
    graded_dimension,
    hilbert_series,
    is_finite_dimensional,
)
from algebra.pathalg import AlgebraInputError, PresentedGradedAlgebra, quotient_by_vertices
from checks.cycheck import verify_complex, verify_self_duality
from config.logger import logger
from config.settings import (
    DEFAULT_CAP,
    DEFAULT_DEGCAP,
    DEFAULT_HILBERT_GRADES,
    DEFAULT_RESOLUTION_CAP,
    DEFAULT_SERRE_ITERATIONS,
    EXAMPLE_DOCUMENTS,
)
from constructions.dimer import (
    check_matching_hypotheses,
    consistency_charge,
    dual_qp,
    first_passing_matching,
    is_perfect_matching,
    matching_to_cut,
    perfect_matchings,
    validate_dimer,
)
from constructions.mckay import (
    McKayInput,
    degree_zero_part_mckay,
    koszul_complex,
    mckay_algebra,
    stable_algebra,
    validate_weights,
)
from constructions.qp import (
    check_main_hypotheses,
    dimer_bimodule_complex,
    find_cuts,
    is_cut,
    jacobian_algebra,
    truncated_algebra,
)
from repthy.bimodule import preprojective_graded_dims
from repthy.homological import cartan_matrix, coxeter_polynomial, global_dimension
from repthy.model import build_model
from repthy.serre import is_representation_infinite


def _csv(value: Optional[str]) -> List[str]:
    if not value:
        return []
    return [part.strip() for part in value.split(",") if part.strip()]


def _ints(value: str, flag: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in _csv(value))
    except ValueError as exc:
        raise AlgebraInputError(f"{flag} expects comma-separated integers, got {value!r}") from exc


def parse_mckay_spec(spec: str) -> McKayInput:
    """'5:1,2,2' -> McKayInput(5, (1, 2, 2))."""
    n, sep, weights = spec.partition(":")
    if not sep:
        raise AlgebraInputError(f"McKay data must look like n:a1,a2,..., got {spec!r}")
    try:
        return McKayInput(int(n), _ints(weights, "--mckay"))
    except ValueError as exc:
        raise AlgebraInputError(f"bad McKay data {spec!r}") from exc


def mckay_emit(inp: McKayInput, emit: str) -> PresentedGradedAlgebra:
    b = mckay_algebra(inp)
    if emit == "B":
        return b
    if emit == "Bbar":
        return stable_algebra(b)
    a = degree_zero_part_mckay(b)
    if emit == "A":
        return a
    if emit == "Abar":
        return stable_algebra(a)
    raise AlgebraInputError(f"unknown algebra {emit!r}; expected B, A, Abar or Bbar")


def _qp_cut(quiver, w, cut, override: Optional[str]):
    chosen = tuple(_csv(override)) if override else cut
    if chosen is None:
        cuts = find_cuts(quiver, w)
        if not cuts:
            raise AlgebraInputError("the potential has no cut and none was given")
        chosen = cuts[0]
        logger.info("No cut given; using %s", ",".join(chosen))
    return tuple(chosen)


def algebra_from_args(args: argparse.Namespace, context: Dict[str, Any]) -> PresentedGradedAlgebra:
    """The algebra named by a document (algebra, or QP truncated at its cut) or by --mckay."""
    if getattr(args, "mckay", None):
        inp = parse_mckay_spec(args.mckay)
        context["document"] = {"mckay": inp.label, "emit": args.emit}
        return mckay_emit(inp, args.emit)
    if not getattr(args, "document", None):
        raise AlgebraInputError("give a document path, @example or --mckay n:a1,...")
    kind, value, data = load_location(args.document)
    context["document"] = data
    if kind == "algebra":
        return value
    if kind == "qp":
        quiver, w, cut, name = value
        return truncated_algebra(quiver, w, _qp_cut(quiver, w, cut, getattr(args, "cut", None)), name=name)
    raise DocumentError(f"expected an algebra or a quiver with potential, got a {kind} document")


class CommandUnit:
    """One subcommand: declares its flags and turns parsed args into a result payload."""

    help = ""

    def __init__(self, name: str):
        self.name = name

    def configure(self, parser: argparse.ArgumentParser) -> None:
        pass

    def run(self, context: Dict[str, Any]) -> Dict[str, Any]:
        raise NotImplementedError("Subclasses must implement run().")


def _algebra_source_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("document", nargs="?", help="algebra or QP document, or @example")
    parser.add_argument("--mckay", help="use McKay data n:a1,...,ad instead of a document")
    parser.add_argument("--emit", default="Abar", choices=["B", "A", "Abar", "Bbar"], help="algebra built from --mckay")
    parser.add_argument("--cut", help="cut for a QP document (defaults to its own)")


# -----------------------------
# Construction units
# -----------------------------

class McKayUnit(CommandUnit):
    help = "McKay quiver algebras and the Koszul bimodule complex"

    def __init__(self):
        super().__init__("mckay")

    def configure(self, parser):
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--weights", required=True, help="a1,...,ad")
        parser.add_argument("--emit", default="B", choices=["B", "A", "Abar", "Bbar", "koszul"])

    def run(self, context):
        args = context["args"]
        inp = McKayInput(args.n, _ints(args.weights, "--weights"))
        context["document"] = {"mckay": inp.label, "emit": args.emit}
        weights = validate_weights(inp)
        if not weights.ok:
            raise AlgebraInputError("weights violate the McKay conditions", weights.as_dict())
        if args.emit == "koszul":
            complex_ = koszul_complex(inp)
            context["result"] = complex_.as_dict()
            context["quiver"] = complex_.algebra.quiver
            return context
        alg = mckay_emit(inp, args.emit)
        context["result"] = algebra_to_data(alg)
        context["quiver"] = alg.quiver
        context["rows"] = [
            {"arrow": a.name, "source": a.source, "target": a.target, "degree": a.degree} for a in alg.quiver.arrows
        ]
        return context


class GroebnerUnit(CommandUnit):
    help = "Groebner completion, normal words and graded dimensions"

    def __init__(self):
        super().__init__("gbasis")

    def configure(self, parser):
        parser.add_argument("document", help="algebra document or @example")
        parser.add_argument("--cap", type=int, default=DEFAULT_CAP)
        parser.add_argument("--emit-basis", action="store_true")
        parser.add_argument("--hilbert", type=int, default=DEFAULT_HILBERT_GRADES, metavar="M")
        parser.add_argument("--corner", help="i,j: count words from j to i")

    def run(self, context):
        args = context["args"]
        kind, alg, data = load_location(args.document)
        if kind != "algebra":
            raise DocumentError(f"gbasis expects an algebra document, got a {kind} document")
        context["document"] = data
        gb = complete_groebner(alg, args.cap)
        corner = None
        if args.corner:
            parts = _csv(args.corner)
            if len(parts) != 2:
                raise AlgebraInputError("--corner expects i,j")
            corner = (parts[0], parts[1])
        dims = [graded_dimension(gb, g, corner, args.cap) for g in range(args.hilbert + 1)]
        result: Dict[str, Any] = {
            "status": gb.status,
            "dims": dims,
            "finite": is_finite_dimensional(gb, args.cap).as_dict(),
        }
        if corner is None:
            result["hilbert"] = hilbert_series(gb, args.hilbert, args.cap).as_dict()
        if args.emit_basis:
            result["basis"] = [str(el) for el in gb.elements]
        context["result"] = result
        context["quiver"] = alg.quiver
        context["rows"] = [{"grade": g, "dimension": d} for g, d in enumerate(dims)]
        return context


class JacobianUnit(CommandUnit):
    help = "Jacobian algebra of a quiver with potential, its cut and truncation"

    def __init__(self):
        super().__init__("jacobian")

    def configure(self, parser):
        parser.add_argument("document", help="QP document or @example")
        parser.add_argument("--cut", help="comma-separated arrows of degree 1")
        parser.add_argument("--truncate", action="store_true", help="emit the degree-0 algebra")
        parser.add_argument("--check-hypotheses", dest="check_hypotheses", help="idempotent vertices v1,v2")
        parser.add_argument("--cap", type=int, default=DEFAULT_CAP)

    def run(self, context):
        args = context["args"]
        kind, value, data = load_location(args.document)
        if kind != "qp":
            raise DocumentError(f"jacobian expects a QP document, got a {kind} document")
        context["document"] = data
        quiver, w, doc_cut, name = value
        cut = tuple(_csv(args.cut)) if args.cut else doc_cut
        result: Dict[str, Any] = {"potential": qp_to_data(quiver, w, cut, name)["potential"]}
        passed = True
        if cut is not None:
            check = is_cut(quiver, w, cut)
            result["cut"] = check.as_dict()
            passed = check.ok
        else:
            result["cuts"] = [list(c) for c in find_cuts(quiver, w)]
        b = jacobian_algebra(quiver, w, cut if cut is not None and passed else None, name=f"Jac({name})")
        result["jacobian"] = algebra_to_data(b)
        shown = b
        if args.truncate:
            if cut is None or not passed:
                raise AlgebraInputError("--truncate needs a valid cut")
            a = truncated_algebra(quiver, w, cut, name=f"A({name})")
            result["truncated"] = algebra_to_data(a)
            result["truncated_quiver_acyclic"] = a.quiver.is_acyclic()
            shown = a
        if args.check_hypotheses:
            if cut is None or not passed:
                raise AlgebraInputError("--check-hypotheses needs a valid cut")
            report = check_main_hypotheses(b, _csv(args.check_hypotheses), args.cap)
            result["hypotheses"] = report.as_dict()
            passed = passed and report.passed
        context["result"] = result
        context["passed"] = passed
        context["quiver"] = shown.quiver
        return context


class DimerUnit(CommandUnit):
    help = "Dimer validation, dual QP, perfect matchings, consistency and hypothesis checks"

    def __init__(self):
        super().__init__("dimer")

    def configure(self, parser):
        parser.add_argument("document", help="dimer document or @example")
        parser.add_argument("--dual", action="store_true")
        parser.add_argument("--matchings", action="store_true")
        parser.add_argument("--consistency", action="store_true")
        parser.add_argument("--check-matching", "--check63", dest="check_matching", action="store_true", help="check the hypotheses for a perfect matching")
        parser.add_argument("--cut", help="edges of a perfect matching; searched when omitted")
        parser.add_argument("--idem", help="faces of the idempotent v1,v2")
        parser.add_argument("--cap", type=int, default=DEFAULT_CAP)
        parser.add_argument("--flip", action="store_true", help="reverse all dual arrows")

    def run(self, context):
        args = context["args"]
        kind, dimer, data = load_location(args.document)
        if kind != "dimer":
            raise DocumentError(f"dimer expects a dimer document, got a {kind} document")
        context["document"] = data
        report = validate_dimer(dimer)
        result: Dict[str, Any] = {"validation": report.as_dict()}
        context["result"] = result
        context["passed"] = report.ok
        if not report.ok:
            return context
        quiver, w = dual_qp(dimer, args.flip)
        context["quiver"] = quiver
        if args.dual:
            result["dual"] = qp_to_data(quiver, w, name=data.get("name", ""))
        if args.matchings:
            matchings = perfect_matchings(dimer)
            result["matchings"] = [
                {"edges": list(m), "is_cut": is_cut(quiver, w, matching_to_cut(dimer, m)).ok} for m in matchings
            ]
            context["rows"] = [{"matching": ",".join(m["edges"]), "cut": m["is_cut"]} for m in result["matchings"]]
        if args.consistency:
            charge = consistency_charge(dimer)
            result["consistency"] = charge.as_dict()
            context["passed"] = context["passed"] and charge.feasible
        if args.check_matching:
            idem = _csv(args.idem)
            if not idem:
                raise AlgebraInputError("--check-matching needs --idem")
            if args.cut:
                matching = _csv(args.cut)
                if not is_perfect_matching(dimer, matching):
                    raise AlgebraInputError("--cut is not a perfect matching", {"edges": matching})
                check = check_matching_hypotheses(dimer, matching, idem, args.flip, args.cap)
            else:
                check = first_passing_matching(dimer, idem, args.flip, args.cap)
            result["matching_hypotheses"] = check.as_dict() if check is not None else {"passed": False, "matching": None}
            context["passed"] = context["passed"] and check is not None and check.passed
        return context


# -----------------------------
# Verification units
# -----------------------------

class CycheckUnit(CommandUnit):
    help = "Verify a bimodule resolution: square zero, graded exactness and self-duality"

    def __init__(self):
        super().__init__("cycheck")

    def configure(self, parser):
        parser.add_argument("--source", required=True, choices=["mckay", "dimer", "qp"])
        parser.add_argument("document", nargs="?", help="dimer or QP document for those sources")
        parser.add_argument("--n", type=int)
        parser.add_argument("--weights")
        parser.add_argument("--cut", help="cut of the QP or matching of the dimer")
        parser.add_argument("--flip", action="store_true")
        parser.add_argument("--degcap", type=int, default=DEFAULT_DEGCAP)
        parser.add_argument("--cap", type=int, default=DEFAULT_CAP)

    def _complex(self, args, context):
        if args.source == "mckay":
            if args.n is None or not args.weights:
                raise AlgebraInputError("--source mckay needs --n and --weights")
            inp = McKayInput(args.n, _ints(args.weights, "--weights"))
            context["document"] = {"mckay": inp.label}
            return koszul_complex(inp), inp.d
        if not args.document:
            raise AlgebraInputError(f"--source {args.source} needs a document")
        kind, value, data = load_location(args.document)
        context["document"] = data
        if args.source == "dimer":
            if kind != "dimer":
                raise DocumentError(f"expected a dimer document, got a {kind} document")
            quiver, w = dual_qp(value, args.flip)
            if args.cut:
                cut = matching_to_cut(value, _csv(args.cut))
            else:
                matchings = perfect_matchings(value)
                if not matchings:
                    raise AlgebraInputError("the dimer has no perfect matching")
                cut = matching_to_cut(value, matchings[0])
        else:
            if kind != "qp":
                raise DocumentError(f"expected a QP document, got a {kind} document")
            quiver, w, doc_cut, _ = value
            cut = _qp_cut(quiver, w, doc_cut, args.cut)
        return dimer_bimodule_complex(quiver, w, cut), 3

    def run(self, context):
        args = context["args"]
        complex_, d = self._complex(args, context)
        gb = complete_groebner(complex_.algebra, args.cap)
        exactness = verify_complex(complex_, gb, args.degcap)
        duality = verify_self_duality(complex_, d)
        context["result"] = {"complex": exactness.as_dict(), "self_duality": duality.as_dict()}
        context["passed"] = exactness.passed and duality.matches
        context["quiver"] = complex_.algebra.quiver
        context["rows"] = [
            {"weight": delta, **{f"H{k}": v for k, v in sorted(h.items())}} for delta, h in sorted(exactness.homology.items())
        ]
        return context


class CoxeterUnit(CommandUnit):
    help = "Cartan matrix and Coxeter polynomial of one or more finite dimensional algebras"

    def __init__(self):
        super().__init__("coxeter")

    def configure(self, parser):
        parser.add_argument("documents", nargs="*", help="algebra or QP documents, or @examples")
        parser.add_argument("--mckay", action="append", default=[], help="n:a1,...,ad (repeatable)")
        parser.add_argument("--emit", default="Abar", choices=["B", "A", "Abar", "Bbar"])
        parser.add_argument("--cap", type=int, default=DEFAULT_CAP)

    def run(self, context):
        args = context["args"]
        sources: List[Tuple[str, PresentedGradedAlgebra]] = []
        documents = []
        for location in args.documents:
            sub = argparse.Namespace(document=location, mckay=None, emit=args.emit, cut=None)
            scratch: Dict[str, Any] = {}
            sources.append((location, algebra_from_args(sub, scratch)))
            documents.append(scratch["document"])
        for spec in args.mckay:
            inp = parse_mckay_spec(spec)
            sources.append((f"{args.emit}({inp.label})", mckay_emit(inp, args.emit)))
            documents.append({"mckay": inp.label, "emit": args.emit})
        if not sources:
            raise AlgebraInputError("coxeter needs at least one document or --mckay")
        context["document"] = documents
        entries = []
        for label, alg in sources:
            model = build_model(alg, args.cap)
            poly = coxeter_polynomial(model)
            entries.append({
                "source": label,
                "vertices": list(model.vertices),
                "cartan": cartan_matrix(model),
                "coxeter_polynomial": str(poly.as_expr()),
                "coefficients": [int(c) for c in poly.all_coeffs()],
                "degree": poly.degree(),
            })
        result: Dict[str, Any] = {"algebras": entries}
        if len(entries) > 1:
            result["distinct"] = len({tuple(e["coefficients"]) for e in entries}) == len(entries)
        context["result"] = result
        context["rows"] = [{"source": e["source"], "polynomial": e["coxeter_polynomial"]} for e in entries]
        return context


class GlobalDimensionUnit(CommandUnit):
    help = "Global dimension from minimal projective resolutions of the simples"

    def __init__(self):
        super().__init__("gldim")

    def configure(self, parser):
        _algebra_source_flags(parser)
        parser.add_argument("--cap", type=int, default=DEFAULT_RESOLUTION_CAP, help="resolution length cap")

    def run(self, context):
        args = context["args"]
        alg = algebra_from_args(args, context)
        model = build_model(alg)
        gldim = global_dimension(model, args.cap)
        context["result"] = gldim.as_dict()
        context["passed"] = gldim.is_finite
        context["quiver"] = alg.quiver
        context["rows"] = [
            {"simple": v, "projective_dimension": d if d is not None else f">={args.cap}"} for v, d in gldim.per_simple
        ]
        return context


class PreprojectiveUnit(CommandUnit):
    help = "Graded dimensions of the (n+1)-preprojective algebra as a tensor algebra of Ext^n(DA, A)"

    def __init__(self):
        super().__init__("preproj")

    def configure(self, parser):
        _algebra_source_flags(parser)
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--max", type=int, default=3, dest="max_degree", metavar="L")
        parser.add_argument("--compare", help="B document, QP document or n:a1,... McKay data to compare with")
        parser.add_argument("--kill", help="vertices v1,v2 removed from the comparison algebra")
        parser.add_argument("--cap", type=int, default=DEFAULT_CAP)

    def run(self, context):
        args = context["args"]
        alg = algebra_from_args(args, context)
        model = build_model(alg)
        dims = preprojective_graded_dims(model, args.n, args.max_degree)
        result: Dict[str, Any] = {"n": args.n, "preprojective": dims.as_dict()}
        if args.compare:
            other = self._comparison(args.compare, _csv(args.kill))
            gb = complete_groebner(other, args.cap)
            expected = [graded_dimension(gb, g, None, args.cap) for g in range(args.max_degree + 1)]
            result["compare"] = {"dims": expected, "equal": list(dims.totals) == expected}
            context["passed"] = list(dims.totals) == expected
        context["result"] = result
        context["quiver"] = alg.quiver
        context["rows"] = [{"degree": k, "dimension": d} for k, d in enumerate(dims.totals)]
        return context

    @staticmethod
    def _comparison(value: str, kill: List[str]) -> PresentedGradedAlgebra:
        """The algebra B with the vertices in kill removed; McKay data defaults to Bbar."""
        if ":" in value and not value.startswith("@") and not value.endswith(".json"):
            b = mckay_algebra(parse_mckay_spec(value))
            return quotient_by_vertices(b, set(kill or ["0"]))
        kind, loaded, _ = load_location(value)
        if kind == "algebra":
            b = loaded
        elif kind == "qp":
            quiver, w, cut, name = loaded
            b = jacobian_algebra(quiver, w, _qp_cut(quiver, w, cut, None), name=name)
        else:
            raise DocumentError(f"cannot compare against a {kind} document")
        return quotient_by_vertices(b, set(kill)) if kill else b


class RepresentationInfiniteUnit(CommandUnit):
    help = "Iterate the inverse Serre functor and test concentration in degree 0"

    def __init__(self):
        super().__init__("repinf")

    def configure(self, parser):
        _algebra_source_flags(parser)
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--iters", type=int, default=DEFAULT_SERRE_ITERATIONS, metavar="L")
        parser.add_argument("--cap", type=int, default=DEFAULT_RESOLUTION_CAP, help="resolution length cap")

    def run(self, context):
        args = context["args"]
        alg = algebra_from_args(args, context)
        model = build_model(alg)
        report = is_representation_infinite(model, args.n, args.iters, args.cap)
        context["result"] = report.as_dict()
        context["passed"] = report.verdict
        context["quiver"] = alg.quiver
        context["rows"] = [
            {"level": it.level, "concentrated": it.concentrated, "H0_total": it.degree_zero_total} for it in report.iterates
        ]
        return context


class ExamplesUnit(CommandUnit):
    help = "List the bundled example documents usable as @name"

    def __init__(self):
        super().__init__("examples")

    def run(self, context):
        rows = [{"name": name, "kind": kind, "file": filename} for name, (kind, filename) in sorted(EXAMPLE_DOCUMENTS.items())]
        context["document"] = {}
        context["result"] = {"examples": rows}
        context["rows"] = rows
        return context


def default_units() -> Dict[str, CommandUnit]:
    units = [
        McKayUnit(),
        GroebnerUnit(),
        JacobianUnit(),
        DimerUnit(),
        CycheckUnit(),
        CoxeterUnit(),
        GlobalDimensionUnit(),
        PreprojectiveUnit(),
        RepresentationInfiniteUnit(),
        ExamplesUnit(),
    ]
    return {unit.name: unit for unit in units}


def render_dot(context: Dict[str, Any]) -> str:
    quiver = context.get("quiver")
    if quiver is None:
        raise AlgebraInputError(f"{context['args'].command} has no quiver to draw")
    return emit_dot(quiver)
