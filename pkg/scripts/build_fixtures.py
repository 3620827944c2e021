#!/usr/bin/env python3
"""Regenerate every fixture under fixtures/: golden logs, designer
walkthrough logs, the 28-player synthetic corpus with its manifest, the
hand-transcribed sample day, and the labeled classification set.

The corpus is authored top-down: each player entry declares its command
script and the emergent scenarios those commands are designed to produce.
The manifest is derived from the declarations, then the real pipeline runs
over the generated logs and the script fails loudly on any mismatch, so a
drifting phrase table or segmentation change cannot silently ship stale
fixtures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"

sys.path.insert(0, str(REPO / "src"))

from dejaboom.assets import load_script
from dejaboom.gateway import RuleBasedProvider
from dejaboom.narrative import build_designer_graph, build_player_graph, emergence_report
from dejaboom.session import LogRecord, start_session, step
from dejaboom.world import load_bundled_world

# ---------------------------------------------------------------------------
# Scenario catalog: every emergent strategy the corpus is designed to create.

SCENARIOS = {
    "E1": ("Trick Moriarty into revealing information", "extracting-information-from-npcs"),
    "E2": ("Ask Moriarty about past rivalries of the village", "extracting-information-from-npcs"),
    "E3": ("Ask Mrs. Thompson to repeat conversations so far", "extracting-information-from-npcs"),
    "E4": ("Ask Chef Maria about Moriarty", "extracting-information-from-npcs"),
    "E5": ("Press Mrs. Thompson for details about Mad Hatter", "extracting-information-from-npcs"),
    "E6": ("Interrogate Moriarty about the explosion", "extracting-information-from-npcs"),
    "E7": ("Ask Merlin about his experiments", "extracting-information-from-npcs"),
    "E8": ("Ask Chef Maria for gossip about the villagers", "extracting-information-from-npcs"),
    "E9": ("Flatter Moriarty to earn his trust", "extracting-information-from-npcs"),
    "E10": ("Ask Mad Hatter about Wonderland", "extracting-information-from-npcs"),
    "E11": ("Ask Merlin about Moriarty's plan", "extracting-information-from-npcs"),
    "N1": ("Search for useful items at home", "new-entity-suggestions"),
    "N2": ("Ask Mrs. Thompson for the location of the sheriff", "new-entity-suggestions"),
    "N3": ("Ask Merlin for magical equipment", "new-entity-suggestions"),
    "N4": ("Search for weapons at home", "new-entity-suggestions"),
    "N5": ("Look for a clock to check the time", "new-entity-suggestions"),
    "N6": ("Ask Chef Maria for a meal", "new-entity-suggestions"),
    "N7": ("Search the park for hidden objects", "new-entity-suggestions"),
    "N8": ("Search the library shelves for other books", "new-entity-suggestions"),
    "H1": ("Hide and wait in the park for Mad Hatter", "creative-hidden-information"),
    "H2": ("Ask Mrs. Thompson to use her dog to find Mad Hatter", "creative-hidden-information"),
    "H3": ("Ask Merlin to solve Mad Hatter's riddle", "creative-hidden-information"),
    "H4": ("Eavesdrop on Moriarty in the town hall", "creative-hidden-information"),
    "H5": ("Ask Mad Hatter for a hint about the riddle", "creative-hidden-information"),
    "H6": ("Climb the statue to survey the village", "creative-hidden-information"),
    "D1": ("Distract Merlin and steal his bomb disposal kit", "new-defuse-methods"),
    "D2": ("Convince Moriarty to defuse the bomb", "new-defuse-methods"),
    "D3": ("Find a hidden switch or lever near the bomb", "new-defuse-methods"),
    "D4": ("Pour water on the bomb to disable it", "new-defuse-methods"),
    "D5": ("Cut the bomb wires with the shears", "new-defuse-methods"),
}

# Shared route fragments; players re-walk designer strategies in the same
# flag order so their nodes merge with the walkthrough nodes exactly.
W1_OPEN = [
    "take water bucket",
    "go residential street",
    "I plan to stop the explosion, can you help me?",
    "go park",
    "knock knock! want to hear a joke?",
    "the bomb must be in the storage room at the blacksmith shop",
]
W1_FULL = W1_OPEN + [
    "take redstone torch",
    "go residential street",
    "go restaurant",
    "go blacksmith shop",
    "take shears",
    "go library",
    "read journal",
    "combine kit",
    "go blacksmith shop",
    "go storage room",
    "defuse bomb",
]
W2_OPEN = [
    "go residential street",
    "go restaurant",
    "do you know anything about the explosion?",
    "go blacksmith shop",
    "go library",
    "go secret lab",
]

PLAYERS: dict[str, dict] = {
    "p01": {
        "emergent": ["E1"],
        "script": [
            "go residential street",
            "go town hall",
            "i know all about your evil plans, let me help you",
            "go residential street",
            "go home",
        ]
        + W1_FULL,
    },
    "p02": {
        "emergent": ["E1", "N2"],
        "script": [
            "go residential street",
            "go town hall",
            "i know all about your evil plans, let me help you",
            "go residential street",
            "where is the sheriff? i should warn him",
        ],
    },
    "p03": {
        "emergent": ["N1"],
        "script": [
            "open the wardrobe",
            "what are the miscellaneous items?",
            "put the flashlight in my inventory?",
            "go residential street",
            "go home",
            "take water bucket",
            "go residential street",
            "I plan to stop the explosion, can you help me?",
        ],
    },
    "p04": {
        "emergent": ["N1", "E3"],
        "script": [
            "open the wardrobe",
            "what are the miscellaneous items?",
            "put the flashlight in my inventory?",
            "go residential street",
            "can you repeat our conversations so far?",
        ],
    },
    "p05": {
        "emergent": ["H1"],
        "script": [
            "go residential street",
            "go park",
            "hide and wait for mad hatter",
        ]
        + ["wait"] * 27
        + [
            "go residential street",
            "go park",
            "hide and wait for mad hatter",
            "wait",
            "wait",
        ],
    },
    "p06": {
        "emergent": ["H1", "E6"],
        "script": [
            "go residential street",
            "go park",
            "hide and wait for mad hatter",
            "wait",
            "wait",
            "go residential street",
            "go town hall",
            "what do you know about the explosion?",
        ],
    },
    "p07": {
        "emergent": ["D2"],
        "script": [
            "go residential street",
            "go town hall",
            "please, you must defuse the bomb before it explodes",
        ],
    },
    "p08": {
        "emergent": ["D2", "E9"],
        "script": [
            "go residential street",
            "go town hall",
            "please, you must defuse the bomb before it explodes",
            "go residential street",
            "go town hall",
            "you are a brilliant man, i admire your work",
        ],
    },
    "p09": {
        "emergent": ["D1"],
        "script": W2_OPEN
        + [
            "teach me fire magic",
            "steal his bomb disposal kit",
            "go library",
            "go secret lab",
            "i beg you, help me defuse the bomb in the village",
            "go library",
            "go town hall",
            "read map",
            "go library",
            "go blacksmith shop",
            "go storage room",
            "defuse bomb",
        ],
    },
    "p10": {
        "emergent": ["D3"],
        "script": W1_OPEN
        + [
            "go residential street",
            "go restaurant",
            "go blacksmith shop",
            "go storage room",
            "look for a hidden switch on the bomb",
            "pull the lever",
        ],
    },
    "p11": {
        "emergent": ["D4"],
        "script": W1_OPEN
        + [
            "go residential street",
            "go restaurant",
            "go blacksmith shop",
            "go storage room",
            "pour water on the bomb",
            "use the water bucket to flood the bomb",
        ],
    },
    "p12": {
        "emergent": ["D5"],
        "script": W1_OPEN
        + [
            "take redstone torch",
            "go residential street",
            "go restaurant",
            "go blacksmith shop",
            "take shears",
            "go storage room",
            "cut the wires with the shears",
            "go blacksmith shop",
            "go library",
            "read journal",
            "combine kit",
            "go blacksmith shop",
            "go storage room",
            "defuse bomb",
        ],
    },
    "p13": {
        "emergent": ["E2"],
        "script": [
            "go residential street",
            "go town hall",
            "tell me about the past rivalries of the village",
        ],
    },
    "p14": {
        "emergent": ["E4"],
        "script": [
            "go residential street",
            "go restaurant",
            "what can you tell me about moriarty?",
        ],
    },
    "p15": {
        "emergent": ["E5", "H5"],
        "script": [
            "go residential street",
            "tell me more about the mad hatter, i saw him in the park",
            "go home",
            "take water bucket",
            "go residential street",
            "I plan to stop the explosion, can you help me?",
            "go park",
            "knock knock! want to hear a joke?",
            "give me a hint about the riddle, i cannot solve it",
        ],
    },
    "p16": {
        "emergent": ["E7"],
        "script": W2_OPEN + ["what experiments are you working on?"],
    },
    "p17": {
        "emergent": ["E8"],
        "script": [
            "go residential street",
            "go restaurant",
            "any rumors or gossip about the villagers?",
        ],
    },
    "p18": {
        "emergent": ["E10"],
        "script": [
            "take water bucket",
            "go residential street",
            "I plan to stop the explosion, can you help me?",
            "go park",
            "tell me about wonderland and the tea parties",
        ],
    },
    "p19": {
        "emergent": ["E11"],
        "script": W2_OPEN + ["was it moriarty who hired you to build this?"],
    },
    "p20": {
        "emergent": ["N3"],
        "script": W2_OPEN + ["can you give me some magical equipment for protection?"],
    },
    "p21": {
        "emergent": ["N4"],
        "script": [
            "look for weapons to defend the village",
            "take the sword from under the bed",
            "open the drawer to find a knife",
        ],
    },
    "p22": {
        "emergent": ["N5"],
        "script": [
            "examine the clock on the wall",
            "what time is it? i must know how long until the explosion",
        ],
    },
    "p23": {
        "emergent": ["N6"],
        "script": [
            "go residential street",
            "go restaurant",
            "can i get a warm meal? i am very hungry",
        ],
    },
    "p24": {
        "emergent": ["N7", "H6"],
        "script": [
            "go residential street",
            "go park",
            "look behind the statue for anything unusual",
            "search near the bushes",
            "go residential street",
            "go park",
            "climb the statue to get a better view",
        ],
    },
    "p25": {
        "emergent": ["N8"],
        "script": [
            "go residential street",
            "go town hall",
            "go library",
            "examine the bookshelf for anything useful",
            "read the other books on the shelves",
        ],
    },
    "p26": {
        "emergent": ["H2"],
        "script": [
            "go residential street",
            "can your dog daisy help me find the mad hatter?",
        ],
    },
    "p27": {
        "emergent": ["H3"],
        "script": W2_OPEN + ["could you solve the mad hatter's riddle for me?"],
    },
    "p28": {
        "emergent": ["H4"],
        "script": [
            "go residential street",
            "go town hall",
            "listen quietly to moriarty from behind the pillar",
            "eavesdrop on his conversation",
        ],
    },
}

REQUIRED_SCENARIOS = ["D1", "N1", "E1"]  # kit theft, home search, ally trickery

CLASSIFICATION_SET = [
    # in-game actions
    {"text": "take water bucket", "at_npc": False, "expected": "action"},
    {"text": "go to park", "at_npc": False, "expected": "action"},
    {"text": "pick up the shears", "at_npc": False, "expected": "action"},
    {"text": "read the journal", "at_npc": False, "expected": "action"},
    {"text": "examine the map", "at_npc": False, "expected": "action"},
    {"text": "look around", "at_npc": False, "expected": "action"},
    {"text": "open the door", "at_npc": False, "expected": "action"},
    {"text": "drop the bucket", "at_npc": False, "expected": "action"},
    {"text": "combine the kit", "at_npc": False, "expected": "action"},
    {"text": "defuse the bomb", "at_npc": False, "expected": "action"},
    {"text": "wait", "at_npc": False, "expected": "action"},
    {"text": "chase the birds", "at_npc": False, "expected": "action"},
    {"text": "wear the water bucket", "at_npc": False, "expected": "action"},
    {"text": "climb the statue", "at_npc": False, "expected": "action"},
    {"text": "steal the disposal kit", "at_npc": True, "expected": "action"},
    {"text": "push the table", "at_npc": False, "expected": "action"},
    {"text": "eat the bread", "at_npc": False, "expected": "action"},
    {"text": "run north", "at_npc": False, "expected": "action"},
    {"text": "grab the torch", "at_npc": False, "expected": "action"},
    {"text": "inventory", "at_npc": False, "expected": "action"},
    # words to characters
    {"text": "can I see your menu", "at_npc": True, "expected": "words"},
    {"text": "hello there", "at_npc": True, "expected": "words"},
    {"text": "who are you?", "at_npc": True, "expected": "words"},
    {"text": "do you know anything about the explosion?", "at_npc": True, "expected": "words"},
    {"text": "I need your help", "at_npc": True, "expected": "words"},
    {"text": "what's your dog's name?", "at_npc": True, "expected": "words"},
    {"text": "tell me about the village", "at_npc": True, "expected": "words"},
    {"text": "where is the sheriff?", "at_npc": True, "expected": "words"},
    {"text": "you mentioned a riddle earlier", "at_npc": True, "expected": "words"},
    {"text": "please help me stop the bomb", "at_npc": True, "expected": "words"},
    {"text": "I think Moriarty planted it", "at_npc": True, "expected": "words"},
    {"text": "can you repeat that?", "at_npc": True, "expected": "words"},
    {"text": "why are you here?", "at_npc": True, "expected": "words"},
    {"text": "thank you for the information", "at_npc": True, "expected": "words"},
    {"text": "I know your evil plans", "at_npc": True, "expected": "words"},
    {"text": "would you teach me magic?", "at_npc": True, "expected": "words"},
    {"text": "your menu looks wonderful", "at_npc": True, "expected": "words"},
    {"text": "say hello to daisy for me", "at_npc": False, "expected": "words"},
    {"text": "greet the merchant", "at_npc": False, "expected": "words"},
    {"text": "knock knock", "at_npc": True, "expected": "words"},
]

EXAMPLE_DAY_INTRO = (
    "You wake up in your bedroom. As you look around the room, everything seems familiar, "
    "yet somehow different. Suddenly, a sense of deja vu washes over you, and you remember "
    "the explosion in the village that occurred yesterday. You realize that you are reliving "
    "the same day again. You feel a sense of urgency to stop the explosion from happening "
    "again. You see a wooden table standing in the center, with a water bucket placed on top. "
    "The atmosphere is quiet and uncluttered. The door to the residential street is on your west."
)


def _label(*flags: str) -> str:
    order = [
        "talked_thompson",
        "hatter_active",
        "told_joke",
        "riddle_received",
        "bomb_located",
        "knows_merlin",
        "merlin_convinced",
        "has_bucket",
        "has_torch",
        "has_shears",
        "read_recipe",
        "has_kit",
    ]
    return "".join("1" if f in flags else "0" for f in order)


def example_day_records() -> list[LogRecord]:
    """Hand-transcribed sample session (day one, ends mid-game).

    The free-text lines are a live-play transcript, so they cannot be
    replayed through the deterministic provider; the structured fields are
    filled by hand and this fixture exercises the offline distiller only.
    """
    l0 = _label()
    l1 = _label("has_bucket")
    l2 = _label("has_bucket", "talked_thompson", "hatter_active")
    rows = [
        (1, 1, 0, "system", EXAMPLE_DAY_INTRO, l0, None, None, None),
        (2, 1, 1, "player", "take water bucket", l1, "action", "take water_bucket", "success"),
        (3, 1, 1, "game_feedback", "You picked up the water bucket.", l1, None, None, None),
        (4, 1, 2, "player", "wear the water bucket", l1, "action", None, "failure"),
        (5, 1, 2, "game_feedback", "You can't wear that!", l1, None, None, None),
        (6, 1, 3, "player", "go to residential street.", l1, "action", "go residential_street", "success"),
        (
            7, 1, 3, "game_feedback",
            "You are in a quiet residential street. You can see Mrs. Thompson walking her dog "
            "towards you. To the north of you, there is a park. To the west, there is a main "
            "street, and to the south, there is a restaurant.",
            l1, None, None, None,
        ),
        (
            8, 1, 3, "npc:mrs_thompson",
            "Hello there! It's a beautiful day, isn't it? How are you today?",
            l1, None, None, None,
        ),
        (9, 1, 4, "player", "I'm good! Do we know each other?", l1, "words", None, None),
        (
            10, 1, 4, "npc:mrs_thompson",
            "Oh, we might not know each other well, but I've seen you around the village. "
            "My name is Mrs. Thompson.",
            l1, None, None, None,
        ),
        (11, 1, 5, "player", "What's your dogs name?", l1, "words", None, None),
        (
            12, 1, 5, "npc:mrs_thompson",
            "Oh, my dog's name is Daisy! She's a lovely little golden retriever, and she's "
            "been my faithful companion for many years.",
            l1, None, None, None,
        ),
        (
            13, 1, 6, "player",
            "Do you know anything about an explosion? Or if anyone has a bomb?",
            l1, "words", None, None,
        ),
        (
            14, 1, 6, "npc:mrs_thompson",
            "Oh, I did hear some rumors about a possible explosion, but I don't know much "
            "about it. It's quite concerning, isn't it? I hope the authorities are doing "
            "something to prevent it.",
            l1, None, None, None,
        ),
        (
            15, 1, 7, "player",
            "Do you know anyone who might know more about the explosion?",
            l2, "words", None, None,
        ),
        (
            16, 1, 7, "npc:mrs_thompson",
            "Well, now that you mention it, I did hear Mad Hatter talking about the explosion "
            "once. He's a bit of an eccentric character and can be found hiding in the park. "
            "Maybe you could try talking to him and see if he knows anything more about the "
            "explosion? Just be careful, he's a bit unpredictable. Good luck!",
            l2, None, None, None,
        ),
        (17, 1, 8, "player", "Go to park", l2, "action", "go park", "success"),
        (
            18, 1, 8, "game_feedback",
            "You are in the park. You can see a man in a top hat standing near the statue. "
            "He appears to be muttering to himself and occasionally glancing around nervously. "
            "You can find the exit to the south. There is a redstone torch.",
            l2, None, None, None,
        ),
        (
            19, 1, 8, "npc:mad_hatter",
            "Ah, welcome to my little corner of the park! I do enjoy a good riddle or joke. "
            "If you have any to share, I'm all ears.",
            l2, None, None, None,
        ),
    ]
    return [
        LogRecord(
            seq=seq,
            day=day,
            step_in_day=step_no,
            role=role,
            text=text,
            state_label_after=label,
            classification=classification,
            canonical=canonical,
            outcome=outcome,
        )
        for seq, day, step_no, role, text, label, classification, canonical, outcome in rows
    ]


def play_script(spec, provider, commands: list[str], session_id: str) -> list[LogRecord]:
    session = start_session(
        spec, provider, session_id=session_id, created="2026-01-01T00:00:00+00:00"
    )
    for command in commands:
        step(session, command)
    return session.records


def write_log(path: Path, records: list[LogRecord]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        for r in records
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_manifest() -> dict:
    players = {}
    for player, entry in PLAYERS.items():
        players[player] = {
            "emergent": [SCENARIOS[sid][0] for sid in entry["emergent"]],
        }
    unique: dict[str, str] = {}
    for sid, (summary, category) in SCENARIOS.items():
        unique[summary] = category
    category_counts: dict[str, int] = {}
    for category in unique.values():
        category_counts[category] = category_counts.get(category, 0) + 1
    total = sum(len(p["emergent"]) for p in players.values())
    return {
        "players": players,
        "total": total,
        "unique": len(unique),
        "category_counts": dict(sorted(category_counts.items())),
        "unique_nodes": [
            {"summary": summary, "category": category}
            for summary, category in sorted(unique.items())
        ],
        "required_scenarios": [SCENARIOS[sid][0] for sid in REQUIRED_SCENARIOS],
    }


def verify(manifest: dict, provider, spec) -> list[str]:
    from dejaboom.session import load_records

    problems = []
    designer_dir = FIXTURES / "corpus" / "designer"
    players_dir = FIXTURES / "corpus" / "players"
    designer = [(p.stem, load_records(p)) for p in sorted(designer_dir.glob("*.jsonl"))]
    graph0 = build_designer_graph(designer, provider)
    player_graphs = {
        p.stem: build_player_graph(load_records(p), provider, p.stem)
        for p in sorted(players_dir.glob("*.jsonl"))
    }
    report = emergence_report(graph0, player_graphs, provider)

    for player, expected in manifest["players"].items():
        got = report.per_player.get(player, -1)
        if got != len(expected["emergent"]):
            merged_player = None
            problems.append(
                f"{player}: expected {len(expected['emergent'])} emergent, got {got}"
            )
    if report.total != manifest["total"]:
        problems.append(f"total: expected {manifest['total']}, got {report.total}")
    if report.unique != manifest["unique"]:
        problems.append(f"unique: expected {manifest['unique']}, got {report.unique}")
    got_counts = report.category_counts()
    if got_counts != manifest["category_counts"]:
        problems.append(f"categories: expected {manifest['category_counts']}, got {got_counts}")
    expected_summaries = {n["summary"] for n in manifest["unique_nodes"]}
    got_summaries = {n.summary for n in report.nodes}
    missing = expected_summaries - got_summaries
    extra = got_summaries - expected_summaries
    if missing:
        problems.append(f"missing emergent nodes: {sorted(missing)}")
    if extra:
        problems.append(f"unexpected emergent nodes: {sorted(extra)}")
    for node in report.nodes:
        expected_cat = {n["summary"]: n["category"] for n in manifest["unique_nodes"]}.get(node.summary)
        if expected_cat and node.category != expected_cat:
            problems.append(f"category of '{node.summary}': expected {expected_cat}, got {node.category}")
    return problems


def main() -> int:
    spec = load_bundled_world()
    provider = RuleBasedProvider(spec)

    golden = FIXTURES / "golden"
    for name, script in [
        ("items_route", "items_route.txt"),
        ("merlin_route", "merlin_route.txt"),
        ("no_defuse", "no_defuse.txt"),
    ]:
        records = play_script(spec, provider, load_script(script), session_id=name)
        write_log(golden / f"{name}.jsonl", records)
        print(f"golden/{name}.jsonl: {len(records)} records")

    for name, script in [("designer-items", "items_route.txt"), ("designer-merlin", "merlin_route.txt")]:
        records = play_script(spec, provider, load_script(script), session_id=name)
        write_log(FIXTURES / "corpus" / "designer" / f"{name}.jsonl", records)

    for player, entry in PLAYERS.items():
        records = play_script(spec, provider, entry["script"], session_id=player)
        write_log(FIXTURES / "corpus" / "players" / f"{player}.jsonl", records)
    print(f"corpus: {len(PLAYERS)} player logs")

    manifest = build_manifest()
    (FIXTURES / "corpus" / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"manifest: total={manifest['total']} unique={manifest['unique']} "
        f"categories={manifest['category_counts']}"
    )

    write_log(FIXTURES / "logs" / "example_day.jsonl", example_day_records())
    (FIXTURES / "classification.json").write_text(
        json.dumps(CLASSIFICATION_SET, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )

    problems = verify(manifest, provider, spec)
    if problems:
        print("\nVERIFICATION FAILED:")
        for problem in problems:
            print(" -", problem)
        return 1
    print("verification: pipeline output matches the manifest")
    return 0


if __name__ == "__main__":
    sys.exit(main())
