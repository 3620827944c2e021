from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from dejaboom.server import AppConfig, create_app


@pytest.fixture()
def client(tmp_path, fixtures_dir):
    config = AppConfig(sessions_dir=str(tmp_path / "sessions"))
    app = create_app(config)
    with TestClient(app) as test_client:
        test_client.sessions_dir = tmp_path / "sessions"
        test_client.fixtures = fixtures_dir
        yield test_client


def create_session(client) -> str:
    response = client.post("/sessions", json={"world": "dejaboom", "provider": "rule"})
    assert response.status_code == 201
    return response.json()["session_id"]


class TestSessions:
    def test_create_and_command(self, client):
        session_id = create_session(client)
        response = client.post(f"/sessions/{session_id}/commands", json={"text": "take water bucket"})
        assert response.status_code == 200
        records = response.json()["records"]
        assert [r["role"] for r in records] == ["player", "game_feedback"]
        assert records[1]["text"] == "You picked up the water bucket."

    def test_empty_command_422(self, client):
        session_id = create_session(client)
        response = client.post(f"/sessions/{session_id}/commands", json={"text": "   "})
        assert response.status_code == 422

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.post("/sessions/nope/commands", json={"text": "look"}).status_code == 404

    def test_won_session_409(self, client, spec):
        from dejaboom.assets import load_script

        session_id = create_session(client)
        for command in load_script("items_route.txt"):
            response = client.post(f"/sessions/{session_id}/commands", json={"text": command})
            assert response.status_code == 200
        assert client.get(f"/sessions/{session_id}").json()["status"] == "WON"
        response = client.post(f"/sessions/{session_id}/commands", json={"text": "look"})
        assert response.status_code == 409

    def test_session_view_fields(self, client):
        session_id = create_session(client)
        client.post(f"/sessions/{session_id}/commands", json={"text": "wait"})
        view = client.get(f"/sessions/{session_id}").json()
        assert view["status"] == "RUNNING"
        assert view["day"] == 1 and view["step_in_day"] == 1
        assert view["recent_records"]

    def test_log_paging_by_seq_cursor(self, client):
        session_id = create_session(client)
        client.post(f"/sessions/{session_id}/commands", json={"text": "take water bucket"})
        client.post(f"/sessions/{session_id}/commands", json={"text": "go residential street"})
        full = client.get(f"/sessions/{session_id}/log").json()
        assert [r["seq"] for r in full["records"]] == list(range(1, len(full["records"]) + 1))
        page = client.get(f"/sessions/{session_id}/log", params={"from_seq": full["records"][2]["seq"]}).json()
        assert page["records"][0]["seq"] == full["records"][2]["seq"] + 1

    def test_api_records_match_persisted_log(self, client):
        session_id = create_session(client)
        client.post(f"/sessions/{session_id}/commands", json={"text": "take water bucket"})
        api_records = client.get(f"/sessions/{session_id}/log").json()["records"]
        log_path = client.sessions_dir / f"{session_id}.jsonl"
        disk_records = [json.loads(line) for line in log_path.read_text().splitlines() if line]
        assert api_records == disk_records

    def test_unknown_world_and_provider(self, client):
        assert client.post("/sessions", json={"world": "atlantis"}).status_code == 404
        assert client.post("/sessions", json={"provider": "psychic"}).status_code == 404

    def test_misconfigured_remote_503_with_retry_after(self, tmp_path):
        config = AppConfig(
            sessions_dir=str(tmp_path),
            providers={"remote": {"type": "remote"}},
        )
        with TestClient(create_app(config)) as client:
            response = client.post("/sessions", json={"provider": "remote"})
            assert response.status_code == 503
            assert "Retry-After" in response.headers

    def test_reject_mode_429_on_concurrent_commands(self, tmp_path, monkeypatch):
        import threading
        import time as time_mod

        from dejaboom import session as session_module

        config = AppConfig(sessions_dir=str(tmp_path), command_conflict="reject")
        with TestClient(create_app(config)) as client:
            session_id = create_session(client)

            real_step = session_module.step
            release = threading.Event()

            def slow_step(session, raw):
                release.wait(timeout=5)
                return real_step(session, raw)

            monkeypatch.setattr(session_module, "step", slow_step)
            statuses = []

            def first():
                statuses.append(
                    client.post(f"/sessions/{session_id}/commands", json={"text": "wait"}).status_code
                )

            worker = threading.Thread(target=first)
            worker.start()
            time_mod.sleep(0.2)  # first request now holds the session lock
            second = client.post(f"/sessions/{session_id}/commands", json={"text": "look"})
            release.set()
            worker.join()
            assert second.status_code == 429
            assert statuses == [200]


class TestAnalysis:
    def _request(self, client) -> dict:
        designer = sorted((client.fixtures / "corpus" / "designer").glob("*.jsonl"))
        players = [client.fixtures / "golden" / "items_route.jsonl"]
        return {
            "designer_logs": [str(p) for p in designer],
            "player_logs": [str(p) for p in players],
        }

    def test_analysis_lifecycle(self, client):
        response = client.post("/analysis/graphs", json=self._request(client))
        assert response.status_code == 201
        graph_id = response.json()["graph_id"]

        graph = client.get(f"/analysis/graphs/{graph_id}").json()
        assert graph["nodes"] and graph["edges"]

        emergence = client.get(f"/analysis/graphs/{graph_id}/emergence").json()
        assert emergence["total"] == 0  # designer-identical log

    def test_same_inputs_same_graph_id(self, client):
        a = client.post("/analysis/graphs", json=self._request(client)).json()["graph_id"]
        b = client.post("/analysis/graphs", json=self._request(client)).json()["graph_id"]
        assert a == b

    def test_unknown_graph_404(self, client):
        assert client.get("/analysis/graphs/deadbeef").status_code == 404
        assert client.get("/analysis/graphs/deadbeef/emergence").status_code == 404

    def test_missing_log_404(self, client):
        request = self._request(client)
        request["player_logs"] = ["/nonexistent/p.jsonl"]
        assert client.post("/analysis/graphs", json=request).status_code == 404
