#!/usr/bin/env python3
"""Regenerate the synthetic corpus under data/.

The corpus mirrors the shape of a 131-video ASMR collection (41/29/36/25 per
category A-D) with random but plausible Likert annotations. Output is
deterministic for a given seed.
"""

import csv
import random
from pathlib import Path

SEED = 131
COUNTS = {"A": 41, "B": 29, "C": 36, "D": 25}
ANNOTATORS = ["p1", "p2", "p3", "p4"]
APPLICATIONS = ["sleep", "relaxation", "concentration", "companionship", "attention"]

TITLE_PARTS = {
    "A": (["Role play:", "Personal attention", "Doctor check-up", "Haircut role play", "Spa visit", "Makeup artist"],
          ["with soft whispers", "and face touching", "close up", "for sleep", "with tapping", "and brushing"]),
    "B": (["Whispered reading", "Soft spoken chat", "Slow whisper ramble", "Story time", "Whispered Q&A", "Soft spoken tutorial"],
          ["by the fireplace", "for relaxation", "with page turning", "and tea", "in the rain", "late night"]),
    "C": (["Slime squishing", "Wood tapping", "Soap cutting", "Page turning", "Brushing the mic", "Crinkle paper"],
          ["no talking", "one hour", "for deep sleep", "close up", "satisfying", "slow"]),
    "D": (["Trigger assortment", "Tapping and scratching", "Twenty triggers", "Mixed textures", "Random triggers", "Layered sounds"],
          ["no talking", "fast and aggressive", "for tingles", "sampler", "tapping slime crinkles", "medley"]),
}


def clamp(v):
    return max(1, min(7, v))


def annotate(rng, category):
    base_tingles = {"A": 5, "B": 4, "C": 5, "D": 4}[category]
    tingles = clamp(round(rng.gauss(base_tingles, 1.3)))
    excitement = clamp(round(rng.gauss(3 if category in "BC" else 4, 1.4)))
    calmness = clamp(round(rng.gauss(5, 1.3)))
    sadness = clamp(round(rng.gauss(1.6, 0.9)))
    stress = clamp(round(rng.gauss(2 if category != "D" else 3, 1.2)))
    apps = []
    if calmness >= 5 and rng.random() < 0.7:
        apps.append("sleep")
    if calmness >= 4 and rng.random() < 0.75:
        apps.append("relaxation")
    if excitement <= 3 and rng.random() < 0.35:
        apps.append("concentration")
    if category in "AB" and rng.random() < 0.5:
        apps.append("companionship")
    if tingles >= 5 and rng.random() < 0.3:
        apps.append("attention")
    return [tingles, excitement, calmness, sadness, stress], "|".join(apps)


def main():
    rng = random.Random(SEED)
    root = Path(__file__).resolve().parent.parent / "data"
    root.mkdir(exist_ok=True)

    videos = []
    n = 0
    for category, count in COUNTS.items():
        heads, tails = TITLE_PARTS[category]
        for _ in range(count):
            n += 1
            vid = f"v{n:03d}"
            title = f"{rng.choice(heads)} {rng.choice(tails)}"
            if rng.random() < 0.1:
                title = f'"{title}", episode {rng.randint(2, 9)}'
            duration = rng.randint(180, 3600)
            videos.append([vid, title, f"https://video.example.org/watch/{vid}", category, duration])

    with open(root / "manifest.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["video_id", "title", "url", "category", "duration_seconds"])
        w.writerows(videos)

    rows = []
    for vid, _, _, category, _ in videos:
        k = 1 if rng.random() < 0.7 else 2
        for annotator in sorted(rng.sample(ANNOTATORS, k)):
            scores, apps = annotate(rng, category)
            rows.append([annotator, vid, *scores, apps])

    with open(root / "annotations.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["annotator_id", "video_id", "tingles", "excitement", "calmness", "sadness", "stress", "applications"])
        w.writerows(rows)

    print(f"{len(videos)} videos, {len(rows)} annotations")


if __name__ == "__main__":
    main()
