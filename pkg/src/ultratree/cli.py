"""Command-line front end.

Every verb maps to one library pipeline and prints deterministic JSON (or
DOT).  Exit codes: 0 for success or a positive decision, 1 for a negative
decision, 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import core, balls, repr_tree, tree_metric, morphisms, padic


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_space(path: str) -> core.Space:
    try:
        return core.space_from_json(_load_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_ultrametric(path: str) -> core.FiniteUltrametricSpace:
    space = _load_space(path)
    if not isinstance(space, core.FiniteUltrametricSpace):
        ok, witness = core.is_ultrametric_triangle(space)
        assert not ok
        i, j, k = witness
        raise InputError(
            f"{path}: not ultrametric, witness triple "
            f"({space.names[i]},{space.names[j]},{space.names[k]})"
        )
    return space


def _load_tree(path: str) -> repr_tree.RootedLabeledTree:
    try:
        return repr_tree.tree_from_json(_load_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _cmd_check(args) -> int:
    obj = _load_json(args.space)
    try:
        names = obj["points"]
        matrix = [[core.parse_rational(v) for v in row] for row in obj["matrix"]]
        ok, witness = core.is_ultrametric_triangle(matrix)
        agree = core.is_ultrametric_multipartite(matrix)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{args.space}: {exc}") from exc
    if ok != agree:
        raise AssertionError("ultrametricity tests disagree")
    _emit({
        "ultrametric": ok,
        "witness": None if witness is None else [names[i] for i in witness],
    })
    return 0 if ok else 1


def _cmd_dset(args) -> int:
    space = _load_space(args.space)
    _emit({"distances": [core.format_rational(v) for v in core.distance_set(space)]})
    return 0


def _cmd_balls(args) -> int:
    space = _load_ultrametric(args.space)
    _emit(balls.ballean_to_json(balls.ballean(space)))
    return 0


def _cmd_tree(args) -> int:
    space = _load_ultrametric(args.space)
    tree = repr_tree.build_representing_tree(space)
    if args.dot:
        sys.stdout.write(repr_tree.tree_to_dot(tree))
    else:
        _emit(repr_tree.tree_to_json(tree))
    return 0


def _cmd_iso(args) -> int:
    a = _load_ultrametric(args.space_a)
    b = _load_ultrametric(args.space_b)
    verdict = morphisms.spaces_isometric(a, b)
    _emit({"isometric": verdict})
    return 0 if verdict else 1


def _cmd_weaksim(args) -> int:
    a = _load_ultrametric(args.space_a)
    b = _load_ultrametric(args.space_b)
    verdict = morphisms.weakly_similar(a, b)
    _emit({"weakly_similar": verdict})
    return 0 if verdict else 1


def _cmd_reconstruct(args) -> int:
    tree = _load_tree(args.tree)
    try:
        rebuilt = tree_metric.reconstruct_space(tree)
    except ValueError as exc:
        raise InputError(f"{args.tree}: {exc}") from exc
    _emit(core.space_to_json(rebuilt.space))
    return 0


def _cmd_representable(args) -> int:
    tree = _load_tree(args.tree)
    result = tree_metric.check_representable(tree)
    _emit({"accepted": result.accepted, "root": result.root, "reason": result.reason})
    return 0 if result.accepted else 1


def _cmd_posetcheck(args) -> int:
    try:
        n, covers = tree_metric.poset_from_json(_load_json(args.poset))
        report = tree_metric.check_ballean_poset(n, covers)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{args.poset}: {exc}") from exc
    _emit({
        "accepted": report.accepted,
        "has_largest": report.has_largest,
        "unique_upper_cover": report.unique_upper_cover,
        "upper_witness": report.upper_witness,
        "lower_covers_ok": report.lower_covers_ok,
        "lower_witness": report.lower_witness,
        "covers_are_covering_relation": report.covers_are_covering_relation,
    })
    return 0 if report.accepted else 1


def _parse_fn(spec: str, space: core.FiniteUltrametricSpace):
    if spec == "quantize":
        return morphisms.quantize_binary(space)
    if ":" in spec:
        verb, _, raw = spec.partition(":")
        value = core.parse_rational(raw)
        if verb == "bound":
            return morphisms.bound_transform(space, value)
        if verb == "unbound":
            return morphisms.unbound_transform(space, value)
        if verb == "threshold":
            return morphisms.apply_preserving(space, morphisms.threshold_function(value))
    raise InputError(
        f"unknown transform {spec!r}; use bound:D|unbound:D|threshold:R|quantize"
    )


def _cmd_transform(args) -> int:
    space = _load_ultrametric(args.space)
    try:
        result = _parse_fn(args.fn, space)
    except (ValueError, morphisms.PreservingFunctionError) as exc:
        raise InputError(str(exc)) from exc
    _emit(core.space_to_json(result))
    return 0


def _cmd_padic(args) -> int:
    obj = _load_json(args.points)
    if not isinstance(obj, list):
        raise InputError(f"{args.points}: expected a JSON array of rationals")
    try:
        space = padic.padic_space(obj, args.prime)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(core.space_to_json(space))
    return 0


def _cmd_bethe(args) -> int:
    try:
        if args.sphere:
            tree = padic.sphere_tree(args.prime, args.depth, args.top)
        else:
            tree = padic.bethe_ball_tree(args.prime, args.depth, args.top)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(repr_tree.tree_to_json(tree))
    return 0


def _cmd_roundtrip(args) -> int:
    space = _load_ultrametric(args.space)
    tree = repr_tree.build_representing_tree(space)
    rebuilt = tree_metric.reconstruct_space(tree)
    verdict = morphisms.spaces_isometric(space, rebuilt.space)
    _emit({"points": len(space), "balls": tree.n, "isometric": verdict})
    return 0 if verdict else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultratree",
        description="Finite ultrametric spaces: balls, representing trees, "
                    "isometry, transforms, p-adic generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="test ultrametricity, with a witness on failure")
    p.add_argument("space")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("dset", help="print the distance set")
    p.add_argument("space")
    p.set_defaults(handler=_cmd_dset)

    p = sub.add_parser("balls", help="enumerate the ballean")
    p.add_argument("space")
    p.set_defaults(handler=_cmd_balls)

    p = sub.add_parser("tree", help="build the representing tree")
    p.add_argument("space")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    p.set_defaults(handler=_cmd_tree)

    p = sub.add_parser("iso", help="decide isometry of two spaces")
    p.add_argument("space_a")
    p.add_argument("space_b")
    p.set_defaults(handler=_cmd_iso)

    p = sub.add_parser("weaksim", help="decide weak similarity of two spaces")
    p.add_argument("space_a")
    p.add_argument("space_b")
    p.set_defaults(handler=_cmd_weaksim)

    p = sub.add_parser("reconstruct", help="rebuild the space a monotone tree represents")
    p.add_argument("tree")
    p.set_defaults(handler=_cmd_reconstruct)

    p = sub.add_parser("representable", help="can this labeled tree represent a space?")
    p.add_argument("tree")
    p.set_defaults(handler=_cmd_representable)

    p = sub.add_parser("posetcheck", help="is this poset a ball lattice?")
    p.add_argument("poset")
    p.set_defaults(handler=_cmd_posetcheck)

    p = sub.add_parser("transform", help="apply a distance transform")
    p.add_argument("--fn", required=True,
                   help="bound:D | unbound:D | threshold:R | quantize")
    p.add_argument("space")
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("padic", help="build a p-adic sample space")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--points", required=True, help="JSON array of rationals")
    p.set_defaults(handler=_cmd_padic)

    p = sub.add_parser("bethe", help="generate a depth-limited p-adic ball/sphere tree")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--top", default="1", help="label of the root (default 1)")
    p.add_argument("--sphere", action="store_true")
    p.set_defaults(handler=_cmd_bethe)

    p = sub.add_parser("roundtrip", help="space -> tree -> space, isometry verdict")
    p.add_argument("space")
    p.set_defaults(handler=_cmd_roundtrip)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except core.SpaceValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
