"""HTTP/JSON service hosting live human-vs-engine games.

The server owns the coin: each turn's toss is addressed by (seed, turn) and
reported back in snapshots, so a client cannot bias the turn order.  Engine
moves run synchronously inside the request; whenever the engine keeps
winning tosses it keeps moving, and the snapshot carries every toss and move
since the request started.  Sessions live in memory, one lock each;
finished games can be appended to a JSON-lines log for offline analysis.

Cell colors in snapshots: 1 for player I, -1 for player II, 0 undecided.
"""

from __future__ import annotations

import itertools
import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import rng
from .games import (
    PLAYER_I,
    PLAYER_II,
    UNDETERMINED,
    GamePosition,
    GameSpec,
    apply_move,
    bridgit_spec,
    hex_spec,
    make_position,
    make_record,
    winner_determined,
)
from .strategy import StrategyConfig, choose_move_mc

SAMPLE_BUDGET_CAP = 200_000
DEFAULT_SAMPLES = 2_000

AWAITING_HUMAN = "awaiting-human"
ENGINE_THINKING = "engine-thinking"
FINISHED = "finished"

TO_WIN = {
    "hex": {
        PLAYER_I: "connect the black edges (top-left to bottom-right rows)",
        PLAYER_II: "connect the white edges (first to last column)",
    },
    "bridgit": {
        PLAYER_I: "link the left and right terminals (Short)",
        PLAYER_II: "separate the terminals (Cut)",
    },
}


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class GameSession:
    id: str
    spec: GameSpec
    position: GamePosition
    human_side: str
    engine_cfg: StrategyConfig
    p: float
    seed: int
    status: str = AWAITING_HUMAN
    winner: str | None = None
    turn: int = 0
    moves: list = field(default_factory=list)
    last_tosses: list = field(default_factory=list)
    heatmap_cache: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def engine_side(self) -> str:
        return PLAYER_II if self.human_side == PLAYER_I else PLAYER_I


def _toss(session: GameSession, turn: int) -> str:
    won_i = rng.uniform(session.seed, rng.STREAM_TOSS, 0, turn) < session.p
    return PLAYER_I if won_i else PLAYER_II


def _engine_move(session: GameSession, turn: int) -> int:
    move_seed = rng.key(session.seed, rng.STREAM_PROBE, 0, turn)
    cfg = session.engine_cfg
    cell, _ = choose_move_mc(session.position,
                             StrategyConfig(samples=cfg.samples, p=session.p,
                                            seed=move_seed, threads=cfg.threads))
    return cell


def _check_finished(session: GameSession) -> bool:
    outcome = winner_determined(session.position)
    if outcome.winner != UNDETERMINED:
        session.status = FINISHED
        session.winner = outcome.winner
        return True
    return False


def _advance(session: GameSession) -> None:
    """Toss coins and play engine moves until the human must act or the game
    ends.  Caller holds the session lock."""
    while True:
        if _check_finished(session):
            return
        turn = session.turn + 1
        mover = _toss(session, turn)
        session.turn = turn
        session.last_tosses.append(mover)
        if mover == session.human_side:
            session.status = AWAITING_HUMAN
            return
        session.status = ENGINE_THINKING
        cell = _engine_move(session, turn)
        session.position = apply_move(session.position, cell, mover)
        session.moves.append((turn, mover, cell))
        session.status = AWAITING_HUMAN


def _cell_payload(session: GameSession, cell: int):
    board = session.spec.board
    if board.kind == "hex":
        return [cell // board.cols, cell % board.cols]
    return cell


def snapshot(session: GameSession) -> dict:
    board = session.spec.board
    colors = [0] * board.n
    for c in session.position.t1:
        colors[c] = 1
    for c in session.position.t2:
        colors[c] = -1
    size = board.rows if board.kind == "hex" else board.params.get("L")
    return {
        "id": session.id,
        "game": board.kind,
        "board": {
            "L": size,
            "rows": board.rows,
            "cols": board.cols,
            "cells": colors,
        },
        "toWin": TO_WIN.get(board.kind, {}).get(session.human_side, ""),
        "p": session.p,
        "turn": session.turn,
        "humanSide": session.human_side,
        "lastTosses": list(session.last_tosses),
        "moves": [
            {"turn": t, "coin": coin, "cell": _cell_payload(session, cell)}
            for t, coin, cell in session.moves
        ],
        "status": session.status,
        "winner": session.winner,
    }


def create_app(static_dir: str | None = None, log_path: str | None = None,
               budget_cap: int = SAMPLE_BUDGET_CAP) -> FastAPI:
    app = FastAPI(title="randomturn game service")
    sessions: dict[str, GameSession] = {}
    registry_lock = threading.Lock()
    serial = itertools.count(1)
    app.state.sessions = sessions

    @app.exception_handler(ServiceError)
    async def _service_error(_req: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    def _get_session(game_id: str) -> GameSession:
        with registry_lock:
            session = sessions.get(game_id)
        if session is None:
            raise ServiceError(404, "no-such-game", f"no session {game_id!r}")
        return session

    def _log_finished(session: GameSession) -> None:
        if not log_path or session.winner is None:
            return
        record = make_record(session.spec, session.p, session.seed, 0,
                             session.moves, session.winner)
        payload = record.to_json_dict()
        payload["humanSide"] = session.human_side
        payload["sessionId"] = session.id
        with open(log_path, "a") as sink:
            sink.write(json.dumps(payload, sort_keys=True) + "\n")

    @app.post("/games")
    def create_game(body: dict):
        game = body.get("game", "hex")
        size = int(body.get("L", body.get("size", 5)))
        p = float(body.get("p", 0.5))
        human_side = body.get("human_side", PLAYER_I)
        samples = int(body.get("engine_samples", DEFAULT_SAMPLES))
        seed = int(body.get("seed", secrets.randbits(32)))
        if size < 1 or size > 25:
            raise ServiceError(400, "bad-size", f"board size {size} out of range 1..25")
        if not 0 < p < 1:
            raise ServiceError(400, "bad-size", f"bias {p} must lie in (0, 1)")
        if human_side not in (PLAYER_I, PLAYER_II):
            raise ServiceError(400, "bad-size", "human_side must be I or II")
        if samples < 1 or samples > budget_cap:
            raise ServiceError(400, "bad-size",
                               f"engine_samples must lie in 1..{budget_cap}")
        if game == "hex":
            spec = hex_spec(size)
        elif game == "bridgit":
            spec = bridgit_spec(size)
        else:
            raise ServiceError(400, "bad-size", f"unknown game {game!r}")
        with registry_lock:
            game_id = f"g{next(serial)}-{secrets.token_hex(4)}"
            session = GameSession(
                id=game_id, spec=spec, position=make_position(spec, p=p),
                human_side=human_side,
                engine_cfg=StrategyConfig(samples=samples), p=p, seed=seed)
            sessions[game_id] = session
        with session.lock:
            _advance(session)
            _log_finished(session)
            return snapshot(session)

    @app.get("/games")
    def list_games():
        with registry_lock:
            all_sessions = list(sessions.values())
        return {
            "games": [
                {"id": s.id, "game": s.spec.board.kind, "status": s.status,
                 "turn": s.turn, "winner": s.winner}
                for s in all_sessions
            ]
        }

    @app.get("/games/{game_id}")
    def get_state(game_id: str):
        session = _get_session(game_id)
        with session.lock:
            return snapshot(session)

    @app.post("/games/{game_id}/moves")
    def post_move(game_id: str, body: dict):
        session = _get_session(game_id)
        with session.lock:
            if session.status == FINISHED:
                raise ServiceError(409, "game-over", "the game is finished")
            if session.status != AWAITING_HUMAN:
                raise ServiceError(409, "not-your-turn", "the engine is moving")
            cell = body.get("cell")
            board = session.spec.board
            try:
                if isinstance(cell, list):
                    if len(cell) != 2 or board.kind != "hex":
                        raise ValueError
                    row, col = int(cell[0]), int(cell[1])
                    if not (0 <= row < board.rows and 0 <= col < board.cols):
                        raise ServiceError(400, "illegal-move",
                                           f"cell ({row}, {col}) is off the board")
                    cell_id = row * board.cols + col
                else:
                    cell_id = int(cell)
            except (TypeError, ValueError):
                raise ServiceError(400, "illegal-move",
                                   f"cell {cell!r} is not addressable")
            if cell_id not in session.position.undecided:
                raise ServiceError(400, "illegal-move",
                                   f"cell {cell!r} is already decided")
            session.last_tosses = []
            session.position = apply_move(session.position, cell_id,
                                          session.human_side)
            session.moves.append((session.turn, session.human_side, cell_id))
            _advance(session)
            _log_finished(session)
            return snapshot(session)

    @app.get("/games/{game_id}/heatmap")
    def get_heatmap(game_id: str):
        session = _get_session(game_id)
        with session.lock:
            key = (session.position.t1, session.position.t2)
            cached = session.heatmap_cache.get(key)
            if cached is None:
                undecided = session.position.undecided
                n = session.spec.board.n
                if not undecided:
                    cached = [0.0] * n
                else:
                    cfg = StrategyConfig(samples=session.engine_cfg.samples,
                                         p=session.p, seed=session.seed)
                    _, est = choose_move_mc(session.position, cfg)
                    cached = [
                        int(est.counts[c]) / est.samples if c in undecided else 0.0
                        for c in range(n)
                    ]
                session.heatmap_cache[key] = cached
            return {"id": session.id, "samples": session.engine_cfg.samples,
                    "values": cached}

    @app.post("/games/{game_id}/resign")
    def resign(game_id: str):
        session = _get_session(game_id)
        with session.lock:
            if session.status == FINISHED:
                raise ServiceError(409, "game-over", "the game is finished")
            session.status = FINISHED
            session.winner = session.engine_side
            _log_finished(session)
            return snapshot(session)

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


app = create_app()
