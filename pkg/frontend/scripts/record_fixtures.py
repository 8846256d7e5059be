"""Record real API bodies for the frontend contract tests.

Run from the repo root: python3 frontend/scripts/record_fixtures.py
Writes JSON files into frontend/tests/fixtures/.
"""

from __future__ import annotations

import itertools
import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from dive import ingest
from dive.ingest import FIXTURE_TARGET
from dive.service.app import create_app

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    counter = itertools.count(1)
    recorded: dict[str, dict] = {}

    def save(name: str, body: dict) -> dict:
        recorded[name] = body
        (OUT / f"{name}.json").write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
        return body

    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(
            tmp,
            id_factory=lambda: f"s-{next(counter):04d}",
            clock=lambda: 1735689600.0,
        )
        with TestClient(app) as client:
            payload = ingest.serialize_document(ingest.build_lady_ada_fixture())
            doc = client.post("/documents", content=payload).json()
            save("document_created", doc)

            session = client.post(
                "/sessions",
                json={"documentId": doc["documentId"], "targets": [FIXTURE_TARGET]},
            ).json()
            save("session", session)
            sid = session["sessionId"]

            save(
                "isolate_ner",
                client.get(
                    f"/sessions/{sid}/isolate",
                    params={"element": "operationClass:Named Entity Recognition"},
                ).json(),
            )
            save(
                "isolate_geo_infer",
                client.get(
                    f"/sessions/{sid}/isolate", params={"element": "geo-infer-1"}
                ).json(),
            )
            save(
                "confidence_initial",
                client.get(f"/sessions/{sid}/confidence").json(),
            )

            save(
                "refute_self_report",
                client.put(
                    f"/sessions/{sid}/refutations",
                    json={"disabled": ["sourceClass:SELF-REPORT"], "version": 1},
                ).json(),
            )
            save(
                "refute_self_report_ner",
                client.put(
                    f"/sessions/{sid}/refutations",
                    json={
                        "disabled": [
                            "sourceClass:SELF-REPORT",
                            "operationClass:Named Entity Recognition",
                        ],
                        "version": 2,
                    },
                ).json(),
            )
            save(
                "confidence_both_refuted",
                client.get(f"/sessions/{sid}/confidence").json(),
            )

            save(
                "refute_low_confidence_doc",
                client.put(
                    f"/sessions/{sid}/refutations",
                    json={
                        "disabled": [ingest.FIXTURE_LOW_CONFIDENCE_DOC],
                        "version": 3,
                    },
                ).json(),
            )
            save(
                "confidence_doc_refuted",
                client.get(f"/sessions/{sid}/confidence").json(),
            )

            save(
                "clear_refutations",
                client.put(
                    f"/sessions/{sid}/refutations", json={"disabled": [], "version": 4}
                ).json(),
            )
            save(
                "policy_avg",
                client.put(
                    f"/sessions/{sid}/policy",
                    json={
                        "andPolicy": "min",
                        "orPolicy": "avg",
                        "appraisalAggregator": "avg",
                        "defaultSeed": 1.0,
                        "version": 5,
                    },
                ).json(),
            )
            save(
                "confidence_or_avg",
                client.get(f"/sessions/{sid}/confidence").json(),
            )

    print(f"recorded {len(recorded)} fixtures into {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
