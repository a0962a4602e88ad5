"""deceptscan command line: scan, gen, explain.

Exit codes: 0 nothing found, 2 findings present, 1 operational error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import NoReturn, Optional, Sequence, TextIO

from .analyzer import scan_bytes
from .config import ConfigError, RuleConfig, load_config
from .corpus import generate_corpus
from .findings import Finding, UnknownTechniqueId, explain
from .message import HeaderSectionMissing

EXIT_CLEAN = 0
EXIT_ERROR = 1
EXIT_FINDINGS = 2


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------

def collect_paths(paths: Sequence[str]) -> tuple[list[Path], list[tuple[str, str]]]:
    files: list[Path] = []
    errors: list[tuple[str, str]] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            files.extend(sorted(path.rglob("*.eml")))
        elif path.exists():
            files.append(path)
        else:
            errors.append((str(path), "no such file or directory"))
    return files, errors


def scan_file(path: Path, config: RuleConfig) -> tuple[list[Finding], Optional[str]]:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        return [], f"cannot read: {exc.strerror or exc}"
    try:
        return scan_bytes(raw, config), None
    except HeaderSectionMissing as exc:
        return [], f"unscannable: {exc}"


def machine_record(path: str, finding: Finding) -> str:
    return json.dumps({"file": path, **finding.to_record()}, ensure_ascii=False, sort_keys=True)


def human_line(path: str, f: Finding) -> str:
    return (f"{path}: {f.rule_id} [{f.indicator.value}/{f.confidence.value}] {f.location}: "
            f"{f.description} (evidence: {f.evidence!r}, section {f.section})")


def run_scan(paths: Sequence[str], config: RuleConfig, fmt: str = "human",
             jobs: int = 1, out: Optional[TextIO] = None) -> int:
    # resolved per call so a replaced sys.stdout is honoured
    out = out or sys.stdout
    files, errors = collect_paths(paths)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda p: scan_file(p, config), files))

    records: list[tuple[str, Optional[Finding], Optional[str]]] = [(p, None, e) for p, e in errors]
    for path, (found, error) in zip(files, results):
        if error is not None:
            records.append((str(path), None, error))
        records.extend((str(path), f, None) for f in found)
    # stable sort keeps per-file finding order from the analyzer
    records.sort(key=lambda r: r[0])

    any_findings = False
    for path, finding, error in records:
        if error is not None:
            if fmt == "machine":
                out.write(json.dumps({"file": path, "error": error}, ensure_ascii=False, sort_keys=True) + "\n")
            else:
                out.write(f"{path}: error: {error}\n")
            continue
        any_findings = True
        out.write((machine_record(path, finding) if fmt == "machine" else human_line(path, finding)) + "\n")
    if fmt == "human":
        n = sum(1 for r in records if r[1] is not None)
        out.write(f"{len(files)} file(s) scanned, {n} finding(s), {sum(1 for r in records if r[2])} error(s)\n")

    if any(r[2] is not None for r in records):
        return EXIT_ERROR
    return EXIT_FINDINGS if any_findings else EXIT_CLEAN


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, which would read as "findings present"
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deceptscan", description="Detect user-deception techniques in email.")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="scan .eml files or directories")
    scan.add_argument("paths", nargs="+")
    scan.add_argument("--config", help="INI config file (default: $DECEPTSCAN_CONFIG)")
    scan.add_argument("--format", choices=("human", "machine"), default="human")
    scan.add_argument("--jobs", type=int, default=1, help="files scanned concurrently")

    gen = sub.add_parser("gen", help="write the labeled sample corpus")
    gen.add_argument("out_dir")

    exp = sub.add_parser("explain", help="describe a rule")
    exp.add_argument("rule_id")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "scan":
        try:
            config = load_config(args.config)
        except (ConfigError, OSError) as exc:
            print(f"deceptscan: {exc}", file=sys.stderr)
            return EXIT_ERROR
        return run_scan(args.paths, config, args.format, args.jobs)

    if args.command == "gen":
        try:
            records = generate_corpus(args.out_dir)
        except OSError as exc:
            print(f"deceptscan: cannot write corpus: {exc}", file=sys.stderr)
            return EXIT_ERROR
        print(f"wrote {len(records)} samples to {args.out_dir}")
        return EXIT_CLEAN

    try:
        sys.stdout.write(explain(args.rule_id.strip()))
    except UnknownTechniqueId as exc:
        print(f"deceptscan: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_CLEAN


if __name__ == "__main__":
    sys.exit(main())
