import json

import pytest
from fastapi.testclient import TestClient

from ptilt import workbench as wb
from ptilt.service import app

client = TestClient(app)


def test_corpus_listing():
    assert client.get("/corpus").json() == list(wb.CORPUS)


@pytest.mark.parametrize("route,command,arg", [
    ("/load", "load", "A2"),
    ("/verify/D", "verify", "D"),
    ("/enumerate/stt", "enumerate", "stt"),
])
def test_service_matches_local_run(route, command, arg):
    resp = client.post(route, json={"corpus": "A2"})
    assert resp.status_code == 200
    local = wb.run(command, arg, "A2", wb.Options())
    assert resp.json() == json.loads(json.dumps(local.to_dict()))


def test_table1_fails_with_one_row():
    body = client.post("/table1", json={"corpus": "EX1"}).json()
    assert body["status"] == "fail" and len(body["failures"]) == 1


def test_session_text_and_options():
    text = wb.corpus_text("A2")
    body = client.post("/load", json={"text": text, "name": "mine", "options": {"prime": 3}}).json()
    assert body["summary"]["prime"] == 3 and "mine" in body["sources"]


@pytest.mark.parametrize("payload,code", [
    ({}, 422),
    ({"corpus": "A2", "text": "x"}, 422),
    ({"corpus": "nope"}, 400),
    ({"text": "vertex 1\narrow a: 1 -> 7\n"}, 400),
    ({"corpus": "A2", "options": {"six_term_form": "sideways"}}, 422),
    ({"text": "field p=2\nvertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 1 -> 2\nindecs brute 6,6\n"}, 413),
])
def test_errors(payload, code):
    assert client.post("/load", json=payload).status_code == code


def test_unknown_targets_are_404():
    assert client.post("/verify/Z", json={"corpus": "A2"}).status_code == 404
    assert client.post("/enumerate/things", json={"corpus": "A2"}).status_code == 404
