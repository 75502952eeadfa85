"""Session service: JSON play messages over a websocket, verdicts from the engine only."""

from fastapi import FastAPI, HTTPException, Response, WebSocket, WebSocketDisconnect

from . import sessions
from .errors import NotYourTurn
from .jsonio import canonical_json

app = FastAPI(title="grouplab sessions")

SESSIONS: dict = {}


@app.get("/health")
def health():
    return {"ok": True}


@app.get("/sessions/{sid}/transcript")
def transcript(sid: str):
    session = SESSIONS.get(sid)
    if session is None:
        raise HTTPException(status_code=404, detail=f"unknown session: {sid}")
    return Response(canonical_json(session.snapshot()), media_type="application/json")


async def _send(ws: WebSocket, msgs):
    for m in msgs:
        await ws.send_text(canonical_json(m))


@app.websocket("/ws")
async def play(ws: WebSocket):
    await ws.accept()
    session = None
    try:
        while True:
            try:
                req = await ws.receive_json()
            except ValueError:
                await _send(ws, [sessions.error_message("malformed request")])
                continue
            kind = req.get("kind")
            if kind == "create":
                try:
                    session = sessions.Session(req.get("config") or {})
                except (TypeError, ValueError) as exc:
                    await _send(ws, [sessions.error_message(str(exc))])
                    continue
                SESSIONS[session.id] = session
                opening = session.open_messages()
                opening[0]["session"] = session.id
                await _send(ws, opening)
            elif kind == "attach":
                sid = req.get("session")
                session = SESSIONS.get(sid)
                if session is None:
                    await _send(ws, [sessions.error_message(f"unknown session: {sid}")])
                    continue
                msg = session.state_message()
                msg["session"] = session.id
                await _send(ws, [msg])
            elif session is None:
                await _send(ws, [sessions.error_message("create or attach a session first")])
            elif kind == "move":
                try:
                    msgs = session.submit_move(req.get("cells") or [])
                except NotYourTurn:
                    msgs = [sessions.error_message("not your turn")]
                await _send(ws, msgs)
            elif kind == "resign":
                await _send(ws, session.resign())
            elif kind == "snapshot":
                await _send(
                    ws,
                    [
                        {
                            "v": sessions.PROTOCOL_VERSION,
                            "kind": "snapshot",
                            "transcript": session.snapshot(),
                        }
                    ],
                )
            else:
                await _send(ws, [sessions.error_message(f"unknown request kind: {kind!r}")])
    except WebSocketDisconnect:
        pass
