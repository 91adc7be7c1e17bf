#!/usr/bin/env python3
# Copyright 2026 The cfedit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled toy lexicon and corpora under data/.

Outputs:
  taxonomy.txt    WordNet-shaped hierarchy (synset / hyper / ant lines)
  embeddings.txt  static word vectors derived from the hierarchy
  sentiment.jsonl templated two-class movie reviews
  topics.jsonl    templated three-class topic texts

The output is a pure function of SEED; rerunning rewrites identical files.
"""

import json
import math
import os
import random
import sys

SEED = 20240611
DIM = 24

# Tree of synsets. Inner keys are synset ids; leaves are lists of synsets
# written as "word|synonym|...". A leaf synset id is "<first word>.<pos>.01".
TREE = {
    "noun": {
        "entity.n": {
            "person.n": {
                "worker.n": ["actor|performer", "actress", "director", "writer|author",
                             "critic|reviewer", "producer", "composer", "editor"],
                "player.n": ["athlete", "striker", "goalkeeper", "coach|trainer",
                             "referee", "captain", "champion", "rookie"],
                "expert.n": ["engineer", "programmer|coder", "scientist", "designer",
                             "chef|cook", "baker", "waiter", "farmer"],
                "group.n": ["audience|viewers", "crowd", "fans", "team|squad",
                            "cast", "crew", "family", "friends"],
            },
            "organism.n": {
                "carnivore.n": {
                    "canine.n": ["dog|hound"],
                    "feline.n": ["cat|kitty"],
                },
                "herbivore.n": ["horse", "cow", "sheep", "rabbit"],
                "bird.n": ["eagle", "sparrow", "owl"],
            },
            "artifact.n": {
                "show.n": ["movie|film", "documentary", "thriller", "comedy",
                           "drama", "sequel", "episode", "series", "cartoon",
                           "musical", "western", "horror"],
                "device.n": ["computer", "laptop", "phone|smartphone", "tablet",
                             "camera", "screen|display", "keyboard", "processor|chip",
                             "battery", "server", "router", "printer", "robot",
                             "headphones", "speaker", "console"],
                "software.n": ["app|application", "program", "browser", "database",
                               "algorithm", "code", "website", "update", "game"],
                "equipment.n": ["ball", "racket", "bat", "helmet", "net", "goal",
                                "bicycle|bike", "skates", "whistle"],
                "dish.n": ["pizza", "pasta", "soup", "salad", "burger", "sandwich",
                           "cake", "pie", "bread", "steak", "curry", "sushi",
                           "dessert", "omelette", "noodles"],
                "ingredient.n": ["cheese", "tomato", "garlic", "onion", "butter",
                                 "sugar", "salt", "pepper", "rice", "flour",
                                 "chocolate", "lemon", "basil"],
                "building.n": ["stadium|arena", "restaurant|diner", "kitchen",
                               "theater|cinema", "office", "lab|laboratory",
                               "gym", "bakery", "cafe"],
            },
        },
        "abstraction.n": {
            "work_part.n": ["plot|storyline", "story|narrative", "script|screenplay",
                            "ending|finale", "scene", "dialogue", "soundtrack|score",
                            "cinematography", "pacing", "character", "twist",
                            "performance", "direction", "effects", "costume"],
            "event.n": ["match", "tournament", "season", "race", "final",
                        "championship", "practice|training", "launch", "release",
                        "meal", "dinner", "lunch", "breakfast", "feast"],
            "measure.n": ["speed", "price|cost", "size", "weight", "length",
                          "temperature", "score_result|result", "record"],
            "attribute.n": ["quality", "flavor|taste", "texture", "aroma|smell",
                            "style", "design_look|look", "tone", "mood", "energy"],
            "concept.n": ["idea|concept", "theme", "message", "rule", "strategy|tactic",
                          "technology|tech", "data", "network", "internet", "recipe",
                          "menu", "portion", "sport"],
            "time_period.n": ["year", "night", "weekend", "evening", "moment",
                              "hour", "minute", "decade"],
        },
    },
    "verb": {
        "act.v": {
            "move.v": ["run", "walk", "jump", "kick|kicked", "throw", "pass", "swim",
                       "climb", "race_v|sprint"],
            "create.v": ["make|create", "build|construct", "write", "cook|cooked", "bake|baked",
                         "design", "develop|developed", "film_v|shoot", "compose", "produce_v"],
            "consume.v": ["eat|ate", "drink", "taste|tasted", "devour|devoured", "sip|sipped"],
            "compete.v": ["win|won", "lose|lost", "score|scored", "defend|defended",
                          "attack|attacked", "train|trained", "beat|defeat", "tie"],
            "operate.v": ["install|installed", "download|downloaded", "upload|uploaded",
                          "program_v|code_v", "debug|debugged", "compute",
                          "connect|connected", "crash|crashed", "charge",
                          "launch_v|launched"],
        },
        "feel.v": {
            "like_feeling.v": ["love|adore", "enjoy|relish", "like", "admire",
                               "appreciate", "praise", "recommend"],
            "dislike_feeling.v": ["hate|detest", "dislike", "despise", "regret",
                                  "criticize", "resent", "dread"],
        },
        "communicate.v": {
            "say.v": ["say|state", "tell", "explain", "announce", "argue",
                      "complain", "shout", "whisper", "claim"],
            "perceive.v": ["watch", "see|view", "hear|listen", "notice", "observe"],
        },
        "change.v": {
            "increase.v": ["improve|enhance", "grow", "rise", "expand", "succeed"],
            "decrease.v": ["worsen|deteriorate", "shrink", "fall|drop", "fail",
                           "collapse"],
        },
    },
    "adj": {
        "evaluative.a": {
            "favorable.a": {
                "positive_quality.a": ["good|fine", "great", "excellent|superb",
                                       "brilliant", "wonderful|marvelous",
                                       "fantastic", "amazing|astonishing",
                                       "perfect", "outstanding", "superior",
                                       "impressive", "memorable", "delightful",
                                       "beautiful|lovely", "charming", "clever",
                                       "gripping", "moving", "hilarious",
                                       "stunning", "solid", "fresh", "tasty|delicious",
                                       "reliable", "smooth", "intuitive", "elegant",
                                       "strong", "entertaining", "engaging"],
                "positive_feeling.a": ["happy|glad", "joyful", "cheerful",
                                       "satisfied", "pleased", "excited", "proud",
                                       "calm"],
            },
            "unfavorable.a": {
                "negative_quality.a": ["bad", "poor", "terrible|dreadful",
                                       "awful", "horrible", "dull", "boring|tedious",
                                       "mediocre", "weak", "forgettable",
                                       "disappointing", "ugly", "clumsy", "stupid",
                                       "confusing", "predictable", "unfunny",
                                       "bland", "flimsy", "stale", "tasteless",
                                       "unreliable", "rough", "clunky", "shoddy",
                                       "inferior", "annoying", "pointless",
                                       "unwatchable", "lifeless"],
                "negative_feeling.a": ["sad|unhappy", "miserable", "gloomy",
                                       "dissatisfied", "displeased", "bored",
                                       "ashamed", "anxious"],
            },
        },
        "descriptive.a": {
            "size_a.a": ["big|large", "small|little", "huge", "tiny", "long",
                         "short"],
            "color.a": ["red", "blue", "green", "yellow", "black", "white"],
            "temperature_a.a": ["hot", "cold", "warm", "cool"],
            "speed_a.a": ["fast|quick", "slow", "rapid", "sluggish"],
            "age_a.a": ["new", "old", "modern", "ancient", "young"],
            "difficulty.a": ["easy|simple", "hard|difficult", "complex", "basic"],
            "texture_a.a": ["soft", "crispy|crunchy", "salty", "sweet", "spicy",
                            "sour", "greasy", "creamy"],
            "loudness.a": ["loud", "quiet|silent"],
        },
    },
    "adv": {
        "manner.r": {
            "well_done.r": ["well", "beautifully", "brilliantly", "perfectly",
                            "wonderfully", "superbly", "skillfully", "smoothly",
                            "happily"],
            "badly_done.r": ["badly", "poorly", "terribly", "awfully", "horribly",
                             "clumsily", "sloppily", "roughly", "sadly"],
        },
        "degree.r": {
            "high_degree.r": ["very", "really", "extremely", "truly", "highly",
                              "completely|totally"],
            "low_degree.r": ["barely", "hardly", "slightly", "somewhat"],
        },
        "frequency.r": {
            "often_f.r": ["always", "often|frequently", "usually"],
            "rarely_f.r": ["never", "rarely|seldom", "occasionally"],
        },
        "timing.r": ["quickly", "slowly", "early", "late", "soon", "finally"],
    },
}

# Extra senses for polysemous words: (word, pos, parent-id).
EXTRA_SENSES = [
    ("play", "noun", "show.n"),
    ("play", "noun", "event.n"),
    ("play", "verb", "compete.v"),
    ("act", "noun", "work_part.n"),
    ("act", "verb", "create.v"),
    ("review", "noun", "work_part.n"),
    ("review", "verb", "say.v"),
    ("review", "noun", "concept.n"),
    ("light", "adj", "size_a.a"),
    ("light", "noun", "attribute.n"),
]

ANTONYMS = [
    ("good", "bad"), ("great", "awful"), ("excellent", "terrible"),
    ("brilliant", "dull"), ("wonderful", "horrible"), ("fantastic", "mediocre"),
    ("amazing", "disappointing"), ("perfect", "flawed_placeholder"),
    ("outstanding", "forgettable"), ("superior", "inferior"),
    ("impressive", "unimpressive_placeholder"), ("memorable", "forgettable"),
    ("delightful", "annoying"), ("beautiful", "ugly"), ("charming", "clumsy"),
    ("clever", "stupid"), ("gripping", "boring"), ("moving", "lifeless"),
    ("hilarious", "unfunny"), ("stunning", "bland"), ("solid", "flimsy"),
    ("fresh", "stale"), ("tasty", "tasteless"), ("reliable", "unreliable"),
    ("smooth", "rough"), ("intuitive", "confusing"), ("elegant", "clunky"),
    ("strong", "weak"), ("entertaining", "pointless"), ("engaging", "tedious"),
    ("fine", "poor"), ("superb", "shoddy"), ("marvelous", "unwatchable"),
    ("happy", "sad"), ("happy", "unhappy"), ("joyful", "miserable"),
    ("cheerful", "gloomy"), ("satisfied", "dissatisfied"),
    ("pleased", "displeased"), ("excited", "bored"), ("proud", "ashamed"),
    ("calm", "anxious"), ("clever", "predictable"),
    ("big", "small"), ("large", "little"), ("huge", "tiny"), ("long", "short"),
    ("black", "white"), ("hot", "cold"), ("warm", "cool"), ("fast", "slow"),
    ("rapid", "sluggish"), ("new", "old"), ("modern", "ancient"),
    ("young", "old"), ("easy", "hard"), ("simple", "complex"),
    ("soft", "crispy"), ("sweet", "sour"), ("loud", "quiet"),
    ("love", "hate"), ("enjoy", "dislike"), ("like", "dislike"),
    ("admire", "despise"), ("appreciate", "resent"), ("praise", "criticize"),
    ("recommend", "dread"), ("win", "lose"), ("attack", "defend"),
    ("improve", "worsen"), ("grow", "shrink"), ("rise", "fall"),
    ("succeed", "fail"), ("expand", "collapse"), ("upload", "download"),
    ("well", "badly"), ("beautifully", "horribly"), ("brilliantly", "poorly"),
    ("perfectly", "terribly"), ("wonderfully", "awfully"),
    ("superbly", "sloppily"), ("skillfully", "clumsily"),
    ("smoothly", "roughly"), ("happily", "sadly"),
    ("always", "never"), ("often", "rarely"), ("usually", "occasionally"),
    ("quickly", "slowly"), ("early", "late"), ("highly", "slightly"),
    ("extremely", "barely"), ("completely", "hardly"),
]

POS_TAG = {"noun": "NOUN", "verb": "VERB", "adj": "ADJ", "adv": "ADV"}

# Polarity used when deriving embeddings, so antonyms point apart.
POSITIVE_PARENTS = {"positive_quality.a", "positive_feeling.a", "like_feeling.v",
                    "increase.v", "well_done.r"}
NEGATIVE_PARENTS = {"negative_quality.a", "negative_feeling.a", "dislike_feeling.v",
                    "decrease.v", "badly_done.r"}


def clean(word):
    # Disambiguating suffixes (race_v, score_result) are stripped from the
    # surface form; the synset id keeps them.
    for suffix in ("_v", "_result", "_look", "_a", "_f"):
        if word.endswith(suffix):
            return word[: -len(suffix)]
    return word


def walk(tree, pos, parent, synsets, hypers):
    for key, value in tree.items():
        synsets.append((key, pos, []))
        if parent is not None:
            hypers.append((key, parent))
        if isinstance(value, dict):
            walk(value, pos, key, synsets, hypers)
        else:
            for leaf in value:
                members = [clean(w) for w in leaf.split("|")]
                sid = leaf.split("|")[0] + "." + pos[0] + ".01"
                synsets.append((sid, pos, members))
                hypers.append((sid, key))


def build_taxonomy():
    synsets, hypers = [], []
    for pos, tree in TREE.items():
        walk(tree, pos, None, synsets, hypers)
    # Inner synsets carry no member words except a readable head word.
    named = []
    for sid, pos, members in synsets:
        if not members:
            head = sid.split(".")[0]
            members = [] if "_" in head else [head]
        named.append((sid, pos, members))
    for i, (word, pos, parent) in enumerate(EXTRA_SENSES):
        sid = "%s.%s.%d" % (word, pos[0], i + 2)
        named.append((sid, pos, [word]))
        hypers.append((sid, parent))
    words = {}
    for sid, pos, members in named:
        for w in members:
            words.setdefault(w, []).append((sid, pos))
    ants = [(a, b) for a, b in ANTONYMS
            if a in words and b in words
            and {p for _, p in words[a]} & {p for _, p in words[b]}]
    return named, hypers, ants, words


def write_taxonomy(path, synsets, hypers, ants):
    with open(path, "w", encoding="utf-8") as f:
        f.write("# toy lexical hierarchy; regenerate with tools/data/make_toy_data.py\n")
        for sid, pos, members in synsets:
            if members:
                f.write("synset %s %s %s\n" % (sid, POS_TAG[pos], ",".join(members)))
            else:
                f.write("synset %s %s\n" % (sid, POS_TAG[pos]))
        for child, parent in hypers:
            f.write("hyper %s %s\n" % (child, parent))
        for a, b in ants:
            f.write("ant %s %s\n" % (a, b))


def gauss_vec(rng):
    return [rng.gauss(0.0, 1.0) for _ in range(DIM)]


def write_embeddings(path, synsets, hypers, words, rng):
    parent = dict(hypers)
    base = {sid: gauss_vec(rng) for sid, _, _ in synsets}

    def chain(sid):
        out = [sid]
        while out[-1] in parent:
            out.append(parent[out[-1]])
        return out

    vectors = {}
    for word in sorted(words):
        acc = [0.0] * DIM
        polarity = 0.0
        for sid, _ in words[word]:
            ancestors = chain(sid)
            for depth, anc in enumerate(ancestors):
                scale = 0.75 ** depth
                for k in range(DIM):
                    acc[k] += scale * base[anc][k]
                if anc in POSITIVE_PARENTS:
                    polarity += 1.0
                elif anc in NEGATIVE_PARENTS:
                    polarity -= 1.0
        noise = gauss_vec(rng)
        for k in range(DIM):
            acc[k] += 0.3 * noise[k]
        acc[0] = 4.0 * polarity
        norm = math.sqrt(sum(x * x for x in acc))
        vectors[word] = [x / norm for x in acc]
    with open(path, "w", encoding="utf-8") as f:
        f.write("%d %d\n" % (len(vectors), DIM))
        for word in sorted(vectors):
            f.write(word + " " + " ".join("%.6f" % x for x in vectors[word]) + "\n")


POS_REVIEW_ADJ = ["good", "great", "excellent", "brilliant", "wonderful", "fantastic",
                  "amazing", "outstanding", "impressive", "memorable", "delightful",
                  "beautiful", "charming", "clever", "gripping", "moving", "hilarious",
                  "stunning", "solid", "fresh", "entertaining", "engaging", "superb"]
NEG_REVIEW_ADJ = ["bad", "poor", "terrible", "awful", "horrible", "dull", "boring",
                  "mediocre", "weak", "forgettable", "disappointing", "ugly", "clumsy",
                  "stupid", "confusing", "predictable", "unfunny", "bland", "stale",
                  "pointless", "tedious", "lifeless", "shoddy"]
POS_ADV = ["beautifully", "brilliantly", "perfectly", "wonderfully", "superbly",
           "skillfully", "well"]
NEG_ADV = ["badly", "poorly", "terribly", "awfully", "horribly", "clumsily", "sloppily"]
POS_VERB = ["love", "enjoy", "admire", "appreciate", "recommend"]
NEG_VERB = ["hate", "dislike", "despise", "regret", "dread"]
POS_FEEL = ["happy", "satisfied", "pleased", "excited", "cheerful"]
NEG_FEEL = ["sad", "dissatisfied", "displeased", "bored", "gloomy"]
FILM_NOUN = ["movie", "film", "plot", "story", "script", "ending", "scene",
             "dialogue", "soundtrack", "cinematography", "pacing", "cast",
             "performance", "direction", "effects", "thriller", "comedy", "drama",
             "sequel", "character", "twist", "costume"]
PEOPLE = ["actor", "actress", "director", "writer", "composer", "cast", "crew"]
NEUTRAL_ADJ = ["long", "short", "new", "old", "modern", "quiet", "loud", "black",
               "white", "slow", "fast"]
DEGREE = ["very", "really", "extremely", "truly", "highly"]

REVIEW_TEMPLATES = [
    "The {noun} was {adj} and the {noun2} was {adj2}.",
    "A {adj} {noun} with a {adj2} {noun2}.",
    "I {verb} this {noun}; the {people} did a {adj} job.",
    "The {people} performed {adv} in this {neutral} {noun}.",
    "What a {adj} {noun}! The {noun2} felt {deg} {adj2}.",
    "This {noun} is {deg} {adj}, and I felt {feel} at the {noun2}.",
    "The {neutral} {noun} was {adj}, {deg} {adj2} overall.",
    "I {verb} the {noun} because the {people} acted {adv}.",
    "Honestly the {noun} is {adj} and the {noun2} is {adj2}.",
    "My friends {verb} it: {adj} {noun}, {adj2} {noun2}.",
]


NEUTRAL_TEMPLATES = [
    "The story follows a {neutral} {people} and the {noun}.",
    "It runs about two hours.",
    "The {noun} takes place in a {neutral} town.",
    "I watched it with my family last weekend.",
    "The {people} also wrote the {noun}.",
]


def review_sentence(rng, pos):
    adjs = POS_REVIEW_ADJ if pos else NEG_REVIEW_ADJ
    tpl = rng.choice(REVIEW_TEMPLATES)
    noun, noun2 = rng.sample(FILM_NOUN, 2)
    adj, adj2 = rng.sample(adjs, 2)
    text = tpl.format(
        noun=noun, noun2=noun2, adj=adj, adj2=adj2,
        verb=rng.choice(POS_VERB if pos else NEG_VERB),
        adv=rng.choice(POS_ADV if pos else NEG_ADV),
        feel=rng.choice(POS_FEEL if pos else NEG_FEEL),
        people=rng.choice(PEOPLE), neutral=rng.choice(NEUTRAL_ADJ),
        deg=rng.choice(DEGREE))
    return text[0].upper() + text[1:]


def neutral_sentence(rng):
    text = rng.choice(NEUTRAL_TEMPLATES).format(
        noun=rng.choice(FILM_NOUN), people=rng.choice(PEOPLE),
        neutral=rng.choice(NEUTRAL_ADJ))
    return text[0].upper() + text[1:]


# Reviews run three to six sentences: mostly on-label opinions, some plot
# filler and now and then one off-label remark.
def make_reviews(rng, count):
    out = []
    for i in range(count):
        label = "positive" if i % 2 == 0 else "negative"
        pos = label == "positive"
        sentences = [review_sentence(rng, pos) for _ in range(rng.randint(2, 4))]
        for _ in range(rng.randint(0, 2)):
            sentences.insert(rng.randint(0, len(sentences)), neutral_sentence(rng))
        if rng.random() < 0.3:
            sentences.insert(rng.randint(1, len(sentences)), review_sentence(rng, not pos))
        out.append({"id": "rev-%04d" % i, "text": " ".join(sentences), "label": label})
    return out


TOPIC_WORDS = {
    "sports": {
        "noun": ["match", "tournament", "season", "team", "coach", "striker",
                 "goalkeeper", "referee", "stadium", "ball", "goal", "championship",
                 "race", "fans", "captain", "athlete", "practice", "final"],
        "verb": ["won", "lost", "scored", "defended", "attacked", "trained", "kicked",
                 "beat"],
        "adj": ["fast", "strong", "young", "hard", "long"],
    },
    "tech": {
        "noun": ["computer", "laptop", "phone", "tablet", "processor", "battery",
                 "server", "router", "app", "browser", "database", "algorithm",
                 "code", "website", "update", "network", "data", "engineer",
                 "programmer"],
        "verb": ["installed", "downloaded", "uploaded", "debugged", "connected",
                 "crashed", "developed", "launched"],
        "adj": ["new", "modern", "fast", "complex", "reliable", "small"],
    },
    "food": {
        "noun": ["pizza", "pasta", "soup", "salad", "burger", "cake", "bread",
                 "steak", "curry", "sushi", "dessert", "cheese", "garlic", "chef",
                 "restaurant", "kitchen", "recipe", "menu", "dinner", "flavor"],
        "verb": ["cooked", "baked", "ate", "tasted", "devoured", "sipped"],
        "adj": ["hot", "sweet", "spicy", "creamy", "crispy", "salty", "fresh",
                "tasty"],
    },
}

TOPIC_TEMPLATES = [
    "The {noun} {verb} the {noun2} in a {adj} way.",
    "Our {noun} {verb} a {adj} {noun2} last {time}.",
    "Everyone talked about the {adj} {noun} and the {noun2}.",
    "The {noun2} was {adj}, so the {noun} {verb} it again.",
    "A {adj} {noun} needs a {noun2} and a {noun3}.",
    "Last {time} the {noun} {verb} the {adj} {noun2}.",
]


def make_topics(rng, count):
    out = []
    labels = list(TOPIC_WORDS)
    for i in range(count):
        label = labels[i % len(labels)]
        words = TOPIC_WORDS[label]
        noun, noun2, noun3 = rng.sample(words["noun"], 3)
        text = rng.choice(TOPIC_TEMPLATES).format(
            noun=noun, noun2=noun2, noun3=noun3, verb=rng.choice(words["verb"]),
            adj=rng.choice(words["adj"]),
            time=rng.choice(["year", "night", "weekend", "evening", "season"]))
        text = text[0].upper() + text[1:]
        out.append({"id": "top-%04d" % i, "text": text, "label": label})
    return out


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, sort_keys=False) + "\n")


def main(argv):
    out_dir = argv[1] if len(argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "..", "data")
    rng = random.Random(SEED)
    synsets, hypers, ants, words = build_taxonomy()
    write_taxonomy(os.path.join(out_dir, "taxonomy.txt"), synsets, hypers, ants)
    write_embeddings(os.path.join(out_dir, "embeddings.txt"), synsets, hypers,
                     words, rng)
    write_jsonl(os.path.join(out_dir, "sentiment.jsonl"), make_reviews(rng, 400))
    write_jsonl(os.path.join(out_dir, "topics.jsonl"), make_topics(rng, 300))
    print("words=%d synsets=%d antonym_pairs=%d" % (len(words), len(synsets), len(ants)))


if __name__ == "__main__":
    main(sys.argv)
