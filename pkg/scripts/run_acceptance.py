"""Run every property suite with the configured seed and validate the bundled documents."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from dotenv import load_dotenv

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from fskit.config import FSKitConfig  # noqa: E402
from fskit.services.core_fuzzy import FuzzySoftError  # noqa: E402
from fskit.services.ingestion import (  # noqa: E402
    COLLECTION,
    TABLE,
    DataDirectoryIngestor,
    load_collection,
    load_crisp_topology,
    load_fss,
)
from fskit.services.laws import LAWS, run_laws  # noqa: E402


def _check_documents(ingestor: DataDirectoryIngestor) -> int:
    failures = 0
    for document in ingestor.collect_documents():
        path = ingestor.data_dir / document["name"]
        try:
            if document["kind"] == TABLE:
                load_fss(path)
            elif document["kind"] == COLLECTION:
                load_collection(path)
            else:
                load_crisp_topology(path)
        except FuzzySoftError as exc:
            print(f"document {document['name']}: {exc}", file=sys.stderr)
            failures += 1
            continue
        print(f"document {document['name']:<20} {document['kind']:<10} {document['sha1'][:12]}")
    return failures


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("laws", nargs="*", default=list(LAWS), help="suites to run (default: all)")
    parser.add_argument("--seed", type=int, help="override FSKIT_SEED")
    args = parser.parse_args()

    load_dotenv(REPO_ROOT / ".env", override=True)
    load_dotenv(override=True)
    config = FSKitConfig.from_env(REPO_ROOT).with_overrides(seed=args.seed)

    failures = _check_documents(DataDirectoryIngestor(REPO_ROOT))
    try:
        reports = run_laws(args.laws, config.seed, config.suite_settings())
    except FuzzySoftError as exc:
        print(f"Acceptance run aborted: {exc}", file=sys.stderr)
        return 1

    for report in reports:
        status = "ok" if report.ok else "FAILED"
        print(
            f"{report.law:<12} seed={report.seed} cases={report.cases:<5} "
            f"violations={report.violations:<3} skipped={report.skipped:<4} {status}"
        )
        if not report.ok:
            print(f"  first witness: {report.first_witness}", file=sys.stderr)
            failures += 1

    print("All suites passed" if not failures else f"{failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
