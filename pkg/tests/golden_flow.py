"""The scripted API session used by the contract test: create a document and
session, isolate, refute, switch policy, read confidence. Deterministic ids
and clock make the bodies reproducible byte for byte."""

from __future__ import annotations

from fastapi.testclient import TestClient

from dive import ingest
from dive.ingest import FIXTURE_TARGET
from dive.service import schemas

from conftest import deterministic_app

STEPS = [
    ("post_document", schemas.DocumentCreated),
    ("create_session", schemas.SessionModel),
    ("isolate_ner", schemas.IsolationModel),
    ("refute_self_report", schemas.WhatIfModel),
    ("refute_self_report_ner", schemas.WhatIfModel),
    ("put_policy", None),
    ("confidence_refuted", schemas.ConfidenceModel),
    ("clear_refutations", schemas.WhatIfModel),
    ("confidence_full", schemas.ConfidenceModel),
]


def run_scripted_flow(tmp_path) -> dict[str, dict]:
    bodies: dict[str, dict] = {}
    with TestClient(deterministic_app(tmp_path)) as client:
        payload = ingest.serialize_document(ingest.build_lady_ada_fixture())
        resp = client.post("/documents", content=payload)
        assert resp.status_code == 201, resp.text
        bodies["post_document"] = resp.json()
        doc_id = bodies["post_document"]["documentId"]

        resp = client.post(
            "/sessions", json={"documentId": doc_id, "targets": [FIXTURE_TARGET]}
        )
        assert resp.status_code == 201, resp.text
        bodies["create_session"] = resp.json()
        sid = bodies["create_session"]["sessionId"]

        resp = client.get(
            f"/sessions/{sid}/isolate",
            params={"element": "operationClass:Named Entity Recognition"},
        )
        assert resp.status_code == 200, resp.text
        bodies["isolate_ner"] = resp.json()

        resp = client.put(
            f"/sessions/{sid}/refutations",
            json={"disabled": ["sourceClass:SELF-REPORT"], "version": 1},
        )
        assert resp.status_code == 200, resp.text
        bodies["refute_self_report"] = resp.json()

        resp = client.put(
            f"/sessions/{sid}/refutations",
            json={
                "disabled": [
                    "sourceClass:SELF-REPORT",
                    "operationClass:Named Entity Recognition",
                ],
                "version": 2,
            },
        )
        assert resp.status_code == 200, resp.text
        bodies["refute_self_report_ner"] = resp.json()

        resp = client.put(
            f"/sessions/{sid}/policy",
            json={
                "andPolicy": "min",
                "orPolicy": "max",
                "appraisalAggregator": "avg",
                "defaultSeed": 1.0,
                "version": 3,
            },
        )
        assert resp.status_code == 200, resp.text
        bodies["put_policy"] = resp.json()

        resp = client.get(f"/sessions/{sid}/confidence")
        assert resp.status_code == 200, resp.text
        bodies["confidence_refuted"] = resp.json()

        resp = client.put(
            f"/sessions/{sid}/refutations", json={"disabled": [], "version": 4}
        )
        assert resp.status_code == 200, resp.text
        bodies["clear_refutations"] = resp.json()

        resp = client.get(f"/sessions/{sid}/confidence")
        assert resp.status_code == 200, resp.text
        bodies["confidence_full"] = resp.json()
    return bodies
