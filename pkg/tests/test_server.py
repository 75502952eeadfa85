"""Session service tests over the in-process websocket client."""

import json

import pytest
from starlette.testclient import TestClient

from grouplab import game
from grouplab.jsonio import canonical_json
from grouplab.server import SESSIONS, app
from grouplab.sessions import PROTOCOL_VERSION, Session


@pytest.fixture()
def client():
    SESSIONS.clear()
    with TestClient(app) as c:
        yield c


def recv(ws):
    return json.loads(ws.receive_text())


def recv_until_turn(ws, who="eve"):
    """Collect messages up to the state handing the move back."""
    msgs = []
    while True:
        m = recv(ws)
        msgs.append(m)
        assert m["kind"] != "error", m
        if m["kind"] == "state" and m["toMove"] == who:
            return msgs


def eve_moves(seed_eve, seed_odd, steps):
    tr = game.run(game.new_game(), game.random_legal(seed_eve), game.random_legal(seed_odd), steps)
    return [
        [list(c) for c in e.move.assignments] for e in tr.moves if e.mover == game.EVE
    ]


def test_health(client):
    assert client.get("/health").json() == {"ok": True}


def test_create_emits_versioned_initial_state(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "create", "config": {"opponent": {"kind": "random", "seed": 1}}})
        first = recv(ws)
    assert first["kind"] == "state"
    assert first["v"] == PROTOCOL_VERSION
    assert first["step"] == 1 and first["toMove"] == "eve"
    assert first["blockBound"] == 2
    assert first["cells"] == []
    assert first["session"] in SESSIONS


def test_legal_move_round_trip_messages(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "create", "config": {"opponent": {"kind": "random", "seed": 3}}})
        recv(ws)
        ws.send_json({"kind": "move", "cells": eve_moves(42, 3, 2)[0]})
        msgs = recv_until_turn(ws)
    kinds = [m["kind"] for m in msgs]
    assert kinds[0] == "verdict" and msgs[0]["verdict"] == "legal"
    assert "move" in kinds  # the engine replied
    assert msgs[-1]["step"] == 3  # two moves elapsed


def test_snapshot_matches_cli_play_bytes(client, tmp_path, capsys):
    moves = eve_moves(42, 3, 6)
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "create", "config": {"opponent": {"kind": "random", "seed": 3}}})
        first = recv(ws)
        sid = first["session"]
        for mv in moves:
            ws.send_json({"kind": "move", "cells": mv})
            recv_until_turn(ws)
        ws.send_json({"kind": "snapshot"})
        snap = recv(ws)
    assert snap["kind"] == "snapshot"
    wire = canonical_json(snap["transcript"])
    http = client.get(f"/sessions/{sid}/transcript").content.decode()
    assert wire == http

    from grouplab import cli

    script = tmp_path / "m.json"
    script.write_text(json.dumps({"moves": moves}))
    code = cli.main(["play", "--script", str(script), "--opponent", "random", "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.strip() == wire


def test_illegal_move_carries_certificate_verbatim(client):
    cells = [[1, 1, 1], [1, 2, 2], [2, 1, 2], [2, 2, 3], [2, 3, 1], [3, 2, 1], [2, 4, 3]]
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "create", "config": {"opponent": {"kind": "random", "seed": 1}}})
        recv(ws)
        ws.send_json({"kind": "move", "cells": cells})
        verdict = recv(ws)
        # move was not applied: still our turn at step 1
        ws.send_json({"kind": "snapshot"})
        snap = recv(ws)
    assert verdict["kind"] == "verdict" and verdict["verdict"] == "illegal"
    engine = game.legal(game.new_game(), game.Move(tuple((i, j, k) for i, j, k in cells)))
    assert verdict["certificate"] == [s.to_json() for s in engine.certificate]
    assert snap["transcript"]["moves"] == []


def test_monitor_message_when_goal_flips(client):
    config = {
        "mode": "abelian",
        "schedule": [{"kind": "divisibility", "n": 2, "k": 2}],
        "opponent": {"kind": "scheduler"},
    }
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "create", "config": config})
        first = recv(ws)
        assert first["monitors"][0]["status"] == "pending"
        ws.send_json({"kind": "move", "cells": [[1, 1, 1], [1, 2, 2], [2, 1, 2], [2, 2, 1]]})
        msgs = recv_until_turn(ws)
    monitor_msgs = [m for m in msgs if m["kind"] == "monitors"]
    assert monitor_msgs
    assert monitor_msgs[-1]["monitors"][0]["status"] == "achieved"


def test_not_your_turn_and_malformed_move(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_json(
            {"kind": "create", "config": {"humanSide": "odd", "opponent": {"kind": "random", "seed": 5}}}
        )
        msgs = recv_until_turn(ws, who="odd")
        assert any(m["kind"] == "move" for m in msgs)  # engine opened as Eve
        ws.send_json({"kind": "move", "cells": [[1, 0, 1]]})
        err = recv(ws)
        assert err["kind"] == "error" and "malformed" in err["reason"]


def test_attach_unknown_session_and_reload(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "attach", "session": "missing"})
        err = recv(ws)
        assert err["kind"] == "error" and "unknown session" in err["reason"]
        ws.send_json({"kind": "create", "config": {"opponent": {"kind": "random", "seed": 2}}})
        first = recv(ws)
        sid = first["session"]
        ws.send_json({"kind": "move", "cells": eve_moves(42, 2, 2)[0]})
        msgs = recv_until_turn(ws)
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "attach", "session": sid})
        state = recv(ws)
    assert state["kind"] == "state"
    assert state == msgs[-1] | {"session": sid}


def test_move_before_create_and_bad_config(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "move", "cells": []})
        err = recv(ws)
        assert err["kind"] == "error"
        ws.send_json({"kind": "create", "config": {"mode": "weird"}})
        err = recv(ws)
        assert err["kind"] == "error" and "mode" in err["reason"]


def test_resign_closes_session(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_json({"kind": "create", "config": {"opponent": {"kind": "random", "seed": 4}}})
        recv(ws)
        ws.send_json({"kind": "resign"})
        state = recv(ws)
        assert state["kind"] == "state"
        ws.send_json({"kind": "move", "cells": [[1, 1, 1]]})
        err = recv(ws)
    assert err["kind"] == "error" and "over" in err["reason"]


def test_session_object_rejects_bad_sides():
    with pytest.raises(ValueError):
        Session({"humanSide": "neither"})
    with pytest.raises(ValueError):
        Session({"opponent": {"kind": "alien"}})
    with pytest.raises(ValueError):
        Session({"opponent": {"kind": "scheduler"}})
