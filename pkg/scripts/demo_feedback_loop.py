#!/usr/bin/env python3
"""Walk the whole feedback loop once, on a throwaway data directory.

Generates the synthetic corpus, runs a cycle, plays a few ratings through the
HTTP API (including a zero that reshapes the rater's tag lists), runs a second
cycle, and prints both evaluation stages.

Usage:
    python scripts/demo_feedback_loop.py
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fastapi.testclient import TestClient

from tagrec.cli import main as tagrec
from tagrec.engine import mint_token
from tagrec.service import ServiceConfig, create_app

SECRET = "demo-secret"


def main() -> int:
    workdir = Path(tempfile.mkdtemp(prefix="tagrec-demo-"))
    data = workdir / "data"
    print(f"demo data dir: {data}")

    tagrec(["synth", "--data-dir", str(data), "--seed", "42"])
    tagrec(["cycle", "--data-dir", str(data), "--admin-secret", SECRET])

    client = TestClient(create_app(ServiceConfig(data_dir=str(data), admin_secret=SECRET)))
    token = mint_token(SECRET, "user00", 1)
    body = client.get(f"/api/v1/recommendations/{token}").json()
    print(f"\nuser00 list: {len(body['items'])} items, "
          f"{len(body['relevant_tags'])} relevant tags")

    books = [it for it in body["items"] if it["item_kind"] == "book"]
    client.post(f"/api/v1/recommendations/{token}/ratings",
                json={"item_id": books[0]["item_id"], "item_kind": "book", "score": 0})
    client.post(f"/api/v1/recommendations/{token}/ratings",
                json={"item_id": books[1]["item_id"], "item_kind": "book", "score": 3})
    refreshed = client.get(f"/api/v1/recommendations/{token}").json()
    print(f"after rating one item 0: {len(refreshed['irrelevant_tags'])} irrelevant tags, "
          f"{len(refreshed['relevant_tags'])} relevant tags")

    response = client.post("/api/v1/admin/cycle", headers={"X-Admin-Secret": SECRET})
    print(f"\nsecond cycle: {response.json()}")

    print("\nhistory stage:")
    tagrec(["evaluate", "--stage", "history", "--data-dir", str(data),
            "--out", str(workdir / "history.csv")])
    print("\nfeedback stage:")
    tagrec(["evaluate", "--stage", "feedback", "--data-dir", str(data),
            "--out", str(workdir / "feedback.csv")])
    return 0


if __name__ == "__main__":
    sys.exit(main())
