import json

import pytest
from fastapi.testclient import TestClient

from emorole.pipeline import PipelineConfig
from emorole.resources import default_rules_path, load_default_lexicons
from emorole.service import create_app

PASSIVE_ATTACK_RULE = {
    "id": "passive-attack",
    "priority": 100,
    "vars": {
        "A": [{"lemma_in_set": "attack"}, {"upos_in": ["VERB"]},
              {"feats_has": {"name": "Voice", "value": "Pass"}}],
        "T": [], "G": [],
    },
    "arcs": [
        {"gov": "A", "dep": "T", "deprels": ["nsubj", "nsubj:pass"]},
        {"gov": "A", "dep": "G", "deprels": ["obl", "obl:agent", "agent"]},
    ],
    "produce": [
        {"role": "Attack", "var": "A", "extent": "token"},
        {"role": "Territory", "var": "T", "extent": "chunk", "link": "A"},
        {"role": "Attacker", "var": "G", "extent": "chunk", "link": "A"},
    ],
}


@pytest.fixture()
def client(scratch_store):
    app = create_app(scratch_store.root,
                     rules_text=default_rules_path().read_text(encoding="utf-8"),
                     lexicons=load_default_lexicons(),
                     cfg=PipelineConfig())
    with TestClient(app) as c:
        c.store = scratch_store
        yield c


def test_list_documents(client):
    body = client.get("/documents").json()
    assert "skills" in body["documents"]
    assert body["schema"] == "emorole-api/1"


def test_get_document(client):
    body = client.get("/documents/skills").json()
    assert body["language"] == "fr"
    assert len(body["sentences"][0]["tokens"]) == 6
    assert body["sentences"][0]["chunks"] == [{"sent": 0, "start": 0, "end": 2}]


def test_unknown_document_404(client):
    assert client.get("/documents/ghost").status_code == 404


def test_annotate_endpoint_returns_skills_roles(client):
    body = client.post("/documents/skills/annotate").json()
    roles = sorted(a["role"] for a in body["annotations"])
    assert roles == ["Attack", "Attacker", "Experiencer", "Territory"]
    # Persisted as predicted.
    stored = client.get("/documents/skills/annotations?kind=predicted").json()
    assert stored["annotations"] == body["annotations"]


def test_annotations_missing_404(client):
    assert client.get("/documents/skills/annotations?kind=gold").status_code == 404


def test_annotations_bad_kind_422(client):
    assert client.get("/documents/skills/annotations?kind=silver").status_code == 422


def test_read_endpoints_are_stable(client):
    client.post("/documents/skills/annotate")
    first = client.get("/documents/skills/annotations").json()
    second = client.get("/documents/skills/annotations").json()
    assert first == second


def test_gold_round_trip_and_eval(client):
    predicted = client.post("/documents/skills/annotate").json()
    put = client.put("/documents/skills/gold", json=predicted)
    assert put.status_code == 200
    gold = client.get("/documents/skills/annotations?kind=gold").json()
    assert gold["annotations"] == predicted["annotations"]


def test_gold_validation_failure_does_not_persist(client):
    bad = {"annotations": [{"id": 0, "role": "Attack",
                            "span": {"sent": 9, "start": 0, "end": 1}}]}
    response = client.put("/documents/skills/gold", json=bad)
    assert response.status_code == 422
    assert "reasons" in response.json()
    assert client.get("/documents/skills/annotations?kind=gold").status_code == 404


def test_gold_write_conflict_409(client):
    predicted = client.post("/documents/skills/annotate").json()
    with client.store.lock("skills"):
        response = client.put("/documents/skills/gold", json=predicted)
    assert response.status_code == 409
    # No data loss: the lock holder wins, the rejected write left nothing.
    assert client.get("/documents/skills/annotations?kind=gold").status_code == 404
    # After release the write succeeds.
    assert client.put("/documents/skills/gold", json=predicted).status_code == 200


def test_graph_endpoint_dot_and_json(client):
    client.post("/documents/skills/annotate")
    dot = client.get("/documents/skills/graph?format=dot").text
    assert '"Mes-0" [fillcolor="red"' in dot
    body = client.get("/documents/skills/graph?layers=seq,chunk&format=json").json()
    assert len(body["nodes"]) == 6
    assert body["layers"] == ["ChunkMembership", "Sequential"]


def test_graph_unknown_layer_422(client):
    assert client.get("/documents/skills/graph?layers=bogus").status_code == 422


def test_ruleset_get_and_swap(client):
    active = client.get("/ruleset").json()["ruleset"]
    assert active["schema"] == "emorole-rules/1"
    new_doc = {"schema": "emorole-rules/1", "rules": [PASSIVE_ATTACK_RULE]}
    response = client.put("/ruleset", json={"ruleset": new_doc})
    assert response.status_code == 200
    assert response.json()["rules"] == ["passive-attack"]
    assert client.get("/ruleset").json()["ruleset"] == new_doc


def test_failed_swap_is_noop(client):
    before = client.get("/ruleset").json()["ruleset"]
    bad = {"schema": "emorole-rules/1", "rules": [{
        "id": "broken", "priority": 1,
        "vars": {"A": [{"lemma_in_set": "missing-set"}]},
        "produce": [{"role": "Attack", "var": "A"}],
    }]}
    response = client.put("/ruleset", json={"ruleset": bad})
    assert response.status_code == 422
    assert "broken" in response.json()["error"]
    assert client.get("/ruleset").json()["ruleset"] == before


def test_swap_changes_annotation_output(client):
    # A ruleset without the possessive rule and without agent handling
    # still finds the territory but keeps everything else identical.
    narrow = {"schema": "emorole-rules/1", "rules": [PASSIVE_ATTACK_RULE]}
    client.put("/ruleset", json={"ruleset": narrow})
    body = client.post("/documents/skills/annotate").json()
    roles = sorted(a["role"] for a in body["annotations"])
    assert roles == ["Attack", "Attacker", "Experiencer", "Territory"]


def test_preview_counts_match_engine(client):
    response = client.post("/ruleset/preview",
                           json={"rule": PASSIVE_ATTACK_RULE, "doc_ids": ["skills"]})
    assert response.status_code == 200
    body = response.json()
    assert body["documents"]["skills"]["count"] == 1
    bindings = body["documents"]["skills"]["matches"][0]["bindings"]
    assert bindings["A"]["surface"] == "attaquées"
    assert bindings["G"]["surface"] == "Marc"


def test_preview_does_not_mutate_active_ruleset(client):
    before = client.get("/ruleset").json()["ruleset"]
    client.post("/ruleset/preview", json={"rule": PASSIVE_ATTACK_RULE})
    assert client.get("/ruleset").json()["ruleset"] == before


def test_preview_compile_error_422(client):
    response = client.post("/ruleset/preview", json={"rule": {
        "id": "x", "priority": 1, "vars": {"A": [{"lemma_in_set": "nope"}]},
        "produce": [{"role": "Attack", "var": "A"}]}})
    assert response.status_code == 422


def test_preview_needs_rule_field(client):
    assert client.post("/ruleset/preview", json={}).status_code == 422


def test_frontend_mount_serves_static_files(scratch_store, tmp_path):
    (tmp_path / "index.html").write_text("<html>workbench</html>", encoding="utf-8")
    app = create_app(scratch_store.root,
                     rules_text=default_rules_path().read_text(encoding="utf-8"),
                     lexicons=load_default_lexicons(),
                     cfg=PipelineConfig(),
                     frontend_dir=tmp_path)
    with TestClient(app) as c:
        assert "workbench" in c.get("/").text
        # API routes keep priority over the static mount.
        assert "documents" in c.get("/documents").json()
