"""Regenerates fixtures/synthetic. Output is fully determined by SEED."""

import csv
import json
import random
from pathlib import Path

SEED = 20170401
OUT = Path(__file__).with_name("synthetic")

ENTITIES = ["Chatterly", "Pingo", "Blabber", "Hollr", "Zapp"]

# (category_id, label, words, skew): skew is the chance an aspect sentence
# carries a positive rather than a negative opinion word.
PLANTED = [
    ("video_call", "video call", ["video", "call"], 0.85),
    ("sticker", "sticker", ["sticker"], 0.85),
    ("camera", "camera", ["camera"], 0.8),
    ("dark_mode", "dark mode", ["dark", "mode"], 0.85),
    ("encryption", "end to end encryption", ["end", "to", "end", "encryption"], 0.8),
    ("battery", "battery", ["battery"], 0.15),
    ("update", "update", ["update"], 0.15),
    ("notification", "notification", ["notification"], 0.2),
    ("login", "login", ["login"], 0.15),
    ("group_chat", "group chat", ["group", "chat"], 0.2),
]

POSITIVE = ["great", "awesome", "excellent", "smooth", "amazing", "love", "nice", "perfect"]
NEGATIVE = ["terrible", "awful", "broken", "slow", "annoying", "bad", "horrible", "useless"]

TEMPLATES = [
    "the {a} is {o}",
    "{o} {a}",
    "i think the {a} is really {o}",
    "honestly the {a} feels {o}",
    "{o} {a} in this app",
    "the new {a} looks {o} to me",
]

FILLER = [
    "I use this app every day",
    "My friends use it too",
    "Please fix it soon",
    "Five stars from me",
    "Not sure what else to say",
    "Installed it last week",
    "Works fine on my phone",
    "The developers should read the reviews",
]

# Which entities offer each planted aspect, for gold.csv.
OFFERED = {
    "video_call": ["Chatterly", "Pingo", "Zapp"],
    "sticker": ["Chatterly", "Hollr", "Zapp"],
    "camera": ["Hollr", "Zapp"],
    "dark_mode": ["Pingo", "Blabber"],
    "encryption": ["Pingo", "Blabber", "Chatterly"],
    "battery": ENTITIES,
    "update": ENTITIES,
    "notification": ["Chatterly", "Pingo", "Blabber"],
    "login": ["Blabber", "Hollr"],
    "group_chat": ["Chatterly", "Pingo", "Hollr", "Blabber"],
}

# Majority bucket per category; votes are spread around it.
BUCKET = {
    "video_call": "must_have",
    "sticker": "delighter",
    "camera": "delighter",
    "dark_mode": "indifferent",
    "encryption": "must_have",
    "battery": "one_dimensional",
    "update": "one_dimensional",
    "notification": "must_have",
    "login": "must_have",
    "group_chat": "delighter",
}
BUCKETS = ["must_have", "one_dimensional", "delighter", "indifferent", "reverse"]


def aspect_sentence(rng, words, skew):
    opinion = rng.choice(POSITIVE) if rng.random() < skew else rng.choice(NEGATIVE)
    text = rng.choice(TEMPLATES).format(a=" ".join(words), o=opinion)
    return text[0].upper() + text[1:] + rng.choice([".", "!", "."])


def main():
    rng = random.Random(SEED)
    reviews = []
    for n in range(500):
        entity = ENTITIES[n % len(ENTITIES)]
        sentences = []
        for _ in range(rng.choice([1, 1, 2, 2, 3])):
            _, _, words, skew = rng.choice(PLANTED)
            sentences.append(aspect_sentence(rng, words, skew))
        if rng.random() < 0.5:
            sentences.insert(rng.randrange(len(sentences) + 1), rng.choice(FILLER) + ".")
        row = {"entity": entity, "review_id": f"{entity.lower()}-{n:04d}", "text": " ".join(sentences)}
        if rng.random() < 0.7:
            row["rating"] = rng.randint(1, 5)
        reviews.append(row)

    with open(OUT / "reviews.jsonl", "w") as f:
        for r in reviews:
            f.write(json.dumps(r) + "\n")

    categories = [
        {"category_id": cid, "label": label, "members": [words]}
        for cid, label, words, _ in PLANTED
    ]
    with open(OUT / "categories.json", "w") as f:
        json.dump(categories, f, indent=2)
        f.write("\n")

    planted = [
        {"category_id": cid, "words": words, "skew": "positive" if skew > 0.5 else "negative"}
        for cid, _, words, skew in PLANTED
    ]
    with open(OUT / "planted.json", "w") as f:
        json.dump(planted, f, indent=2)
        f.write("\n")

    with open(OUT / "votes.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["subject_id", "category_id", "bucket"])
        for s in range(31):
            for cid, *_ in PLANTED:
                bucket = BUCKET[cid] if rng.random() < 0.6 else rng.choice(BUCKETS)
                w.writerow([f"s{s:02d}", cid, bucket])

    with open(OUT / "gold.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "aliases", "entities"])
        for cid, label, words, _ in PLANTED:
            w.writerow([label.title(), "", "|".join(OFFERED[cid])])
        w.writerow(["Voice Messages", "voice note", "Chatterly|Zapp"])
        w.writerow(["Stories", "", "Hollr"])

    with open(OUT / "lexicon" / "positive-words.txt", "w") as f:
        f.write(";\n; Positive opinion words for the synthetic corpus.\n;\n")
        f.write("\n".join(sorted(POSITIVE + ["fine", "good"])) + "\n")
    with open(OUT / "lexicon" / "negative-words.txt", "w") as f:
        f.write(";\n; Negative opinion words for the synthetic corpus.\n;\n")
        f.write("\n".join(sorted(NEGATIVE + ["fix"])) + "\n")


if __name__ == "__main__":
    main()
