"""Command-line front end.

Pairs and witnesses are kept as small JSON descriptors under a store
directory (``--store``, default ``$EFFINSEP_STORE`` or ``./effinsep-store``)::

    pairs/<name>.json       how to rebuild the pair
    witnesses/<name>.json   pair, start kind, target kind and edge list
    reports/<name>.json     the last verification report

Witnesses are rebuilt from their descriptors, since host shortcuts do not
serialize; the stored payload index is checked on reload.  Exit codes: 0 on
success, 1 when a clause FAILs, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .convert import ConversionError, derive_path, find_path
from .index_algebra import finite_set_index
from .kernel.machine import Index, decode_program
from .metamath import atomic_oracle, ei_theory_witness, escape_witness, independent_sentence, prove, show
from .metamath.syntax import Not, Pred, Sentence
from .pairs import DisjointPair, Kind, PropertyWitness, finite_pair, kleene_pair, lift_pair, value_pair
from .verify import all_pass, check_witness, control_cases, dumps, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- set specs --------------------------------------------------------------------------


def parse_set(spec: str) -> frozenset[int] | str:
    """A finite set, or the name of a Kleene side ("kleene:A" / "kleene:B")."""
    spec = spec.strip()
    try:
        if spec.startswith("evens<="):
            return frozenset(range(0, int(spec[7:]) + 1, 2))
        if spec.startswith("odds<="):
            return frozenset(range(1, int(spec[6:]) + 1, 2))
        if spec.startswith("finite:"):
            body = spec[7:].strip()
            return frozenset(int(t) for t in body.split(",") if t.strip()) if body else frozenset()
        if spec.startswith("file:"):
            lines = Path(spec[5:]).read_text().split()
            return frozenset(int(t) for t in lines)
        if spec in ("kleene:A", "kleene:B"):
            return spec
        return frozenset({int(spec)})
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad set spec {spec!r}: {exc}") from None


def _finite(spec: str) -> frozenset[int]:
    s = parse_set(spec)
    if isinstance(s, str):
        raise UsageError(f"{spec} is not a finite set")
    return s


def _short(n: int) -> str:
    return f"<{n.bit_length()}-bit>" if n.bit_length() > 80 else str(n)


def fmt_sentence(s: Sentence) -> str:
    core = s.f if isinstance(s, Not) else s
    if isinstance(core, Pred) and core.t.base is None and core.t.k.bit_length() > 80:
        text = f"P(<{core.t.k.bit_length()}-bit numeral>)"
        return "~" + text if core is not s else text
    return show(s)


# -- store ----------------------------------------------------------------------------------


class Store:
    def __init__(self, root: str) -> None:
        self.root = Path(root)

    def path(self, kind: str, name: str) -> Path:
        safe = name.replace("/", "_")
        return self.root / kind / f"{safe}.json"

    def save(self, kind: str, name: str, data: dict) -> Path:
        p = self.path(kind, name)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return p

    def load(self, kind: str, name: str) -> dict | None:
        p = self.path(kind, name)
        return json.loads(p.read_text()) if p.exists() else None


def build_pair(desc: dict) -> DisjointPair:
    kind = desc["kind"]
    if kind == "kleene":
        return kleene_pair()[0]
    if kind == "value":
        return value_pair(*desc["args"])
    if kind == "lift":
        a, b = (frozenset(x) for x in desc["args"])
        return lift_pair(finite_set_index(a), finite_set_index(b))
    raise UsageError(f"unknown pair kind {kind!r}")


def pair_descriptor(store: Store, name: str) -> dict:
    desc = store.load("pairs", name)
    if desc is None:
        if name == "kleene":
            return {"name": "kleene", "kind": "kleene", "args": []}
        raise UsageError(f"no pair named {name!r} in {store.root}")
    return desc


def _listing(idx: Index) -> list[str]:
    prog = decode_program(idx)
    return [f"  {pc:3d}  {ins.op.name:<6} {' '.join(_short(a) for a in ins.args)}" for pc, ins in enumerate(prog.instrs)]


def cmd_pair(args, store: Store, out) -> int:
    if args.which == "kleene":
        desc = {"name": args.name or "kleene", "kind": "kleene", "args": []}
    elif args.which == "value":
        if len(args.values) != 2:
            raise UsageError("pair value takes two naturals i j")
        i, j = args.values
        if i == j:
            raise UsageError("pair value needs i != j")
        desc = {"name": args.name or f"value-{i}-{j}", "kind": "value", "args": [i, j]}
    else:
        if args.a is None or args.b is None:
            raise UsageError("pair lift needs --a and --b")
        a, b = _finite(args.a), _finite(args.b)
        if a & b:
            raise UsageError("lift sides overlap")
        if not a or not b:
            raise UsageError("lift sides must be nonempty")
        desc = {"name": args.name or f"lift-{args.a}-{args.b}", "kind": "lift", "args": [sorted(a), sorted(b)]}
    p = build_pair(desc)
    desc["a_index"], desc["b_index"] = hex(p.a.idx), hex(p.b.idx)
    path = store.save("pairs", desc["name"], desc)
    print(f"pair {desc['name']}: {p.name}", file=out)
    for label, side in (("A", p.a), ("B", p.b)):
        print(f"{label}: index {_short(side.idx)}  ({side.provenance})", file=out)
        print("\n".join(_listing(side.idx)), file=out)
    print(f"stored {path}", file=out)
    return EXIT_OK


def _kind(name: str) -> Kind:
    try:
        return Kind(name)
    except ValueError:
        raise UsageError(f"unknown kind {name!r}; choose from {', '.join(k.value for k in Kind)}") from None


def canonical_witness(desc: dict) -> PropertyWitness:
    if desc["kind"] != "kleene":
        raise UsageError(f"pair {desc['name']!r} has no canonical witness (only kleene pairs do)")
    return kleene_pair()[1]


def rebuild_witness(store: Store, data: dict) -> PropertyWitness:
    desc = pair_descriptor(store, data["pair"])
    w = derive_path(canonical_witness(desc), Kind(data["from"]))
    w = derive_path(w, Kind(data["to"]))
    if hex(w.payload.idx) != data["payload_index"]:
        raise UsageError(f"witness {data['name']!r} no longer rebuilds to its stored index")
    return w


def cmd_derive(args, store: Store, out) -> int:
    src, dst = _kind(args.src), _kind(args.dst)
    desc = pair_descriptor(store, args.pair)
    start = canonical_witness(desc)
    try:
        w = derive_path(start, src)
        edges = find_path(src, dst)
        w = derive_path(w, dst)
    except ConversionError as exc:
        raise UsageError(str(exc)) from None
    print(f"{src} -> {dst} on {desc['name']}: {len(edges)} edge(s)", file=out)
    for e in edges:
        print(f"  {e.src} -> {e.dst}  [{e.label}]", file=out)
    name = args.name or f"{desc['name']}-{dst}"
    data = {
        "name": name,
        "pair": desc["name"],
        "from": src.value,
        "to": dst.value,
        "kind": w.kind.value,
        "edges": [f"{e.src}->{e.dst}" for e in edges],
        "derivation": list(w.derivation),
        "payload_index": hex(w.payload.idx),
    }
    path = store.save("witnesses", name, data)
    print(f"stored witness {name} at {path}", file=out)
    return EXIT_OK


def cmd_verify(args, store: Store, out) -> int:
    controls = {name: (w, s) for name, w, s in control_cases()}
    if args.witness in controls:
        w, s = controls[args.witness]
        reports = [check_witness(w, s, args.fuel)]
    else:
        data = store.load("witnesses", args.witness)
        if data is None:
            raise UsageError(f"no witness named {args.witness!r} in {store.root}")
        w = rebuild_witness(store, data)
        reports = run_suite(w, args.fuel, extended=args.suite == "extended")
    if args.fuel <= 0:
        print("warning: fuel 0 gives no evidence; every verdict is Unknown", file=out)
    for r in reports:
        counts = {k: sum(c.status == k for c in r.clauses) for k in ("PASS", "FAIL", "UNKNOWN")}
        tally = " ".join(f"{k.lower()}={v}" for k, v in counts.items())
        print(f"{r.overall:<4}  {r.scenario_id}  ({tally})", file=out)
        for c in r.clauses:
            if c.status == "FAIL":
                print(f"      FAIL {c.name}: premise {c.premise_verdict}, conclusion {c.conclusion_verdict}", file=out)
    path = store.root / "reports" / f"{args.witness}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(reports) + "\n")
    ok = all_pass(reports)
    print(f"{'PASS' if ok else 'FAIL'}: {len(reports)} scenario(s), report at {path}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_independence(args, store: Store, out) -> int:
    A, B = parse_set(args.A), parse_set(args.B)
    if isinstance(A, str) or isinstance(B, str):
        if (A, B) != ("kleene:A", "kleene:B"):
            raise UsageError("non-finite specs are supported only as --A kleene:A --B kleene:B")
        p, kp = kleene_pair()
        w = derive_path(kp, Kind.EI)
        certifiable = False
    else:
        if A & B:
            raise UsageError(f"A and B overlap at {sorted(A & B)[:5]}")
        p = finite_pair(A, B, f"{args.A} | {args.B}")
        # finite pairs have no genuine EI witness; escape past both tables
        w = escape_witness(p, 1 + max(A | B, default=-1))
        certifiable = True
    tw = ei_theory_witness(w)
    nu = tw.pair
    s = independent_sentence(tw, nu.a.idx, nu.b.idx)
    t_name = f"T({p.name})"
    print(f"theory {t_name}", file=out)
    print(f"sentence {fmt_sentence(s)}", file=out)
    from .metamath.theory import theory_of

    t = theory_of(p)
    for label, goal in (("proof of sentence", s), ("proof of negation", Not(s))):
        v = prove(t, goal, args.fuel)
        print(f"{label}: {v.status} at fuel {args.fuel}", file=out)
    if certifiable:
        pos = atomic_oracle(A, B, s)
        neg = atomic_oracle(A, B, Not(s))
        verdict = "certified independent" if not (pos or neg) else "NOT independent"
        print(f"oracle: provable={pos} refutable={neg}: {verdict}", file=out)
        return EXIT_OK if not (pos or neg) else EXIT_FAIL
    print("note: A and B are not decidable here, so the result is not oracle-certifiable", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="effinsep", description="Disjoint RE pairs, witnesses and theories.")
    ap.add_argument("--store", default=os.environ.get("EFFINSEP_STORE", "effinsep-store"))
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("pair", help="build a pair and store its descriptor")
    p.add_argument("which", choices=["kleene", "value", "lift"])
    p.add_argument("values", nargs="*", type=int)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--name")

    d = sub.add_parser("derive", help="walk the conversion graph and store the witness")
    d.add_argument("--from", dest="src", required=True)
    d.add_argument("--to", dest="dst", required=True)
    d.add_argument("--pair", default="kleene")
    d.add_argument("--name")

    v = sub.add_parser("verify", help="run a scenario suite against a stored witness")
    v.add_argument("--witness", required=True)
    v.add_argument("--suite", choices=["default", "extended"], default="default")
    v.add_argument("--fuel", type=int, default=10**6)

    i = sub.add_parser("independence", help="extract an independent sentence of T(A, B)")
    i.add_argument("--A", required=True)
    i.add_argument("--B", required=True)
    i.add_argument("--fuel", type=int, default=10**6)
    return ap


COMMANDS = {"pair": cmd_pair, "derive": cmd_derive, "verify": cmd_verify, "independence": cmd_independence}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.cmd](args, Store(args.store), out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
