"""On-disk persistence: documents as canonical dive/1 files plus a JSONL
session journal. No database; a data directory is trivially inspectable and
backed up with cp."""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from .. import ingest
from ..analysis import Analysis, analyze, apply_refutations
from ..model import ProvDocument
from ..propagate import PolicyConfig
from ..tms import WhatIfState

DOCUMENT_SUFFIX = ".dive.json"
JOURNAL_NAME = "sessions.jsonl"


def _utc_stamp(now: float) -> str:
    return (
        datetime.fromtimestamp(now, tz=timezone.utc)
        .isoformat(timespec="seconds")
        .replace("+00:00", "Z")
    )


def document_id_for(canonical: bytes) -> str:
    return "doc-" + hashlib.sha256(canonical).hexdigest()[:12]


@dataclass(frozen=True)
class SessionRecord:
    id: str
    document_id: str
    targets: tuple[str, ...]
    disabled: tuple[str, ...]
    cfg: PolicyConfig
    version: int
    created_at: str
    updated_at: str

    def to_json(self) -> dict:
        return {
            "sessionId": self.id,
            "documentId": self.document_id,
            "targets": list(self.targets),
            "disabled": list(self.disabled),
            "policy": {
                "andPolicy": self.cfg.and_policy,
                "orPolicy": self.cfg.or_policy,
                "appraisalAggregator": self.cfg.appraisal_aggregator,
                "defaultSeed": self.cfg.default_seed,
            },
            "version": self.version,
            "createdAt": self.created_at,
            "updatedAt": self.updated_at,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SessionRecord":
        policy = obj.get("policy", {})
        return cls(
            id=obj["sessionId"],
            document_id=obj["documentId"],
            targets=tuple(obj["targets"]),
            disabled=tuple(obj.get("disabled", ())),
            cfg=PolicyConfig(
                and_policy=policy.get("andPolicy", "min"),
                or_policy=policy.get("orPolicy", "max"),
                appraisal_aggregator=policy.get("appraisalAggregator", "avg"),
                default_seed=policy.get("defaultSeed", 1.0),
            ),
            version=obj["version"],
            created_at=obj["createdAt"],
            updated_at=obj["updatedAt"],
        )


class Store:
    """Documents, sessions, and their computed analyses.

    Loaded documents are immutable snapshots; sessions mutate only under the
    lock and carry a version stamp for optimistic concurrency.
    """

    def __init__(
        self,
        data_dir: Path,
        id_factory: Optional[Callable[[], str]] = None,
        clock: Optional[Callable[[], float]] = None,
    ):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._id_factory = id_factory or (lambda: "s-" + uuid.uuid4().hex[:12])
        self._clock = clock or (lambda: datetime.now(tz=timezone.utc).timestamp())
        self._lock = threading.RLock()
        self._documents: dict[str, ProvDocument] = {}
        self._canonical: dict[str, bytes] = {}
        self._sessions: dict[str, SessionRecord] = {}
        self._analyses: dict[str, Analysis] = {}
        self._states: dict[str, WhatIfState] = {}
        self._load()

    # --- loading -------------------------------------------------------------

    def _load(self) -> None:
        for path in sorted(self.data_dir.glob(f"*{DOCUMENT_SUFFIX}")):
            raw = path.read_bytes()
            try:
                doc = ingest.parse_document(raw)
            except Exception:
                continue  # ignore foreign files in the data dir
            canonical = ingest.serialize_document(doc)
            doc_id = path.name[: -len(DOCUMENT_SUFFIX)]
            self._documents[doc_id] = doc
            self._canonical[doc_id] = canonical
        journal = self.data_dir / JOURNAL_NAME
        if journal.exists():
            for line in journal.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                obj = json.loads(line)
                if obj.get("deleted"):
                    self._sessions.pop(obj["sessionId"], None)
                else:
                    record = SessionRecord.from_json(obj)
                    if record.document_id in self._documents:
                        self._sessions[record.id] = record

    def _journal(self, obj: dict) -> None:
        with (self.data_dir / JOURNAL_NAME).open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(obj, sort_keys=True) + "\n")

    def now_stamp(self) -> str:
        return _utc_stamp(self._clock())

    # --- documents -------------------------------------------------------------

    def put_document(self, doc: ProvDocument) -> str:
        canonical = ingest.serialize_document(doc)
        doc_id = document_id_for(canonical)
        with self._lock:
            if doc_id not in self._documents:
                self._documents[doc_id] = doc
                self._canonical[doc_id] = canonical
                (self.data_dir / f"{doc_id}{DOCUMENT_SUFFIX}").write_bytes(canonical)
        return doc_id

    def get_document(self, doc_id: str) -> Optional[ProvDocument]:
        return self._documents.get(doc_id)

    def get_canonical(self, doc_id: str) -> Optional[bytes]:
        return self._canonical.get(doc_id)

    # --- sessions ---------------------------------------------------------------

    def create_session(self, document_id: str, targets: list[str]) -> SessionRecord:
        doc = self._documents[document_id]
        analysis = analyze(doc, targets)
        with self._lock:
            stamp = self.now_stamp()
            record = SessionRecord(
                id=self._id_factory(),
                document_id=document_id,
                targets=analysis.subgraph.targets,
                disabled=(),
                cfg=PolicyConfig(),
                version=1,
                created_at=stamp,
                updated_at=stamp,
            )
            self._sessions[record.id] = record
            self._analyses[record.id] = analysis
            self._states[record.id] = apply_refutations(analysis, ())
            self._journal(record.to_json())
            return record

    def get_session(self, session_id: str) -> Optional[SessionRecord]:
        return self._sessions.get(session_id)

    def analysis_for(self, session_id: str) -> Analysis:
        with self._lock:
            if session_id not in self._analyses:
                record = self._sessions[session_id]
                doc = self._documents[record.document_id]
                self._analyses[session_id] = analyze(doc, list(record.targets))
            return self._analyses[session_id]

    def state_for(self, session_id: str) -> WhatIfState:
        with self._lock:
            if session_id not in self._states:
                record = self._sessions[session_id]
                self._states[session_id] = apply_refutations(
                    self.analysis_for(session_id), record.disabled
                )
            return self._states[session_id]

    def mutate_session(
        self,
        session_id: str,
        expected_version: Optional[int],
        *,
        disabled: Optional[list[str]] = None,
        cfg: Optional[PolicyConfig] = None,
    ) -> SessionRecord:
        """Apply one mutation under optimistic concurrency.

        Raises KeyError for unknown sessions and VersionConflict when the
        caller's version stamp is stale.
        """
        with self._lock:
            record = self._sessions[session_id]
            if expected_version is not None and expected_version != record.version:
                raise VersionConflict(record.version)
            changes: dict = {
                "version": record.version + 1,
                "updated_at": self.now_stamp(),
            }
            if disabled is not None:
                state = apply_refutations(
                    self.analysis_for(session_id), disabled
                )
                self._states[session_id] = state
                changes["disabled"] = tuple(disabled)
            if cfg is not None:
                changes["cfg"] = cfg
            record = replace(record, **changes)
            self._sessions[session_id] = record
            self._journal(record.to_json())
            return record

    def delete_session(self, session_id: str) -> None:
        with self._lock:
            self._sessions.pop(session_id)
            self._analyses.pop(session_id, None)
            self._states.pop(session_id, None)
            self._journal({"sessionId": session_id, "deleted": True})


class VersionConflict(Exception):
    def __init__(self, current_version: int):
        super().__init__(f"session is at version {current_version}")
        self.current_version = current_version
