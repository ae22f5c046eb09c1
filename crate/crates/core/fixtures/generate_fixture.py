#!/usr/bin/env python3
"""Generate the bundled synthetic persuasive-essay corpus in brat standoff format.

Writes essays/essayNNN.txt + .ann, split.csv and expected_stats.json. The
statistics are counted here from the construction (components, relations) and
with an independent regex tokenizer/sentence splitter implementing the same
documented segmentation rule as the library's fallback segmenter.

Run from this directory: python3 generate_fixture.py
"""
import json
import os
import random
import re
import statistics

SEED = 20160601
N_ESSAYS = 40
N_TEST = 8

TOPICS = [
    ("technology", "modern technology"),
    ("tourism", "international tourism"),
    ("school uniforms", "school uniforms"),
    ("online courses", "online education"),
    ("public transport", "public transportation"),
    ("team sports", "competitive team sports"),
    ("space research", "space exploration"),
    ("city life", "living in a big city"),
    ("homework", "daily homework"),
    ("advertising", "television advertising"),
]

TITLES = [
    "Is {long} good for society?",
    "Should governments support {long}?",
    "The role of {long} in our lives",
    "Advantages and disadvantages of {long}",
]

INTRO_BACKGROUND = [
    "Nowadays {short} is discussed in many countries",
    "Many people have different views about {long}",
    "The debate about {short} has become more intense in recent years",
    "Some experts say that {short} changes the way we live",
    "Newspapers often write about {long}",
]

THESIS_OPENERS = [
    "In my opinion,",
    "I strongly believe that",
    "From this point of view,",
    "As far as I am concerned,",
    "I believe that",
]

MAJOR_CLAIMS = [
    "{long} has far more advantages than disadvantages",
    "{long} should be supported by every government",
    "the benefits of {short} clearly outweigh its drawbacks",
    "society gains a lot from {long}",
]

CONCLUSION_OPENERS = ["To sum up,", "In conclusion,", "All in all,", "To conclude,"]

CLAIM_OPENERS = ["First of all,", "Secondly,", "Furthermore,", "Another reason is that", "", "Moreover,"]

CLAIMS_FOR = [
    "{short} improves the quality of everyday life",
    "{short} creates new jobs for young people",
    "{long} helps people to learn new skills",
    "{short} brings communities closer together",
    "{long} makes the economy stronger",
    "{short} offers valuable experiences to students",
]

CLAIMS_AGAINST = [
    "{short} can also have negative effects on health",
    "{long} is sometimes too expensive for poor families",
    "{short} may harm the environment",
    "{long} can distract people from important duties",
]

PREMISE_OPENERS = ["For example,", "For instance,", "", "In addition,", "Besides,", "Additionally,"]

PREMISES = [
    "many workers save a lot of time every day",
    "a recent study showed that families spend more time together",
    "my brother found a good job thanks to {short}",
    "students can practice what they learn at school",
    "small companies earn more money and hire more staff",
    "people meet others from different cultures",
    "the costs for ordinary citizens have decreased over the years",
    "doctors report fewer stress related illnesses",
    "children develop a sense of responsibility",
    "local shops sell more products to visitors",
    "older people feel less lonely",
    "governments collect more taxes which fund hospitals",
]

ATTACK_PREMISES = [
    "some people feel overwhelmed by {short}",
    "the initial costs of {short} are very high",
    "a few studies found no clear benefit",
    "critics argue that {short} wastes resources",
]

REBUTTAL_OPENERS = ["However,", "Admittedly,", "Although it is true that", "But"]

SERIAL_LINKERS = ["because", "since", "as"]

NONARG_BODY = [
    "This point is often ignored in public discussions",
    "Let us look at this aspect more closely",
]

NONARG_CONCLUSION = [
    "I hope that more people will think about this issue",
    "Everyone should read more about this topic",
    "This is a question that will stay with us for a long time",
]

TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")


def tokenize(text, offset):
    return [(m.group(0), offset + m.start(), offset + m.end()) for m in TOKEN_RE.finditer(text)]


def split_sentences(tokens):
    sents, cur = [], []
    i = 0
    while i < len(tokens):
        cur.append(tokens[i])
        if tokens[i][0] in ".?!":
            j = i + 1
            while j < len(tokens) and tokens[j][0] in ".?!\")'":
                cur.append(tokens[j])
                j += 1
            sents.append(cur)
            cur = []
            i = j
            continue
        i += 1
    if cur:
        sents.append(cur)
    return sents


def cap(s):
    return s[0].upper() + s[1:] if s else s


class Builder:
    """Accumulates paragraph text while recording component character spans."""

    def __init__(self, base):
        self.base = base
        self.text = ""
        self.components = []

    def plain(self, s):
        if self.text and not self.text.endswith(" ") and s[0].isalnum():
            self.text += " "
        self.text += s

    def comp(self, ctype, s, stance=None):
        if self.text and not self.text.endswith(" "):
            self.text += " "
        start = self.base + len(self.text)
        self.text += s
        end = self.base + len(self.text)
        self.components.append({"type": ctype, "start": start, "end": end, "text": s, "stance": stance})
        return len(self.components) - 1

    def period(self):
        self.text += "."


def fill(s, topic):
    return s.format(short=topic[0], long=topic[1])


def make_essay(rng, idx):
    topic = rng.choice(TOPICS)
    title = fill(rng.choice(TITLES), topic)
    title = cap(title)
    header = title + "\n\n"
    paragraphs = []  # list of (text, components, relations)
    relations_all = []
    comps_all = []
    offset = len(header)

    def new_para():
        return Builder(offset)

    # introduction
    b = new_para()
    for s in rng.sample(INTRO_BACKGROUND, rng.choice([1, 2, 2, 3])):
        b.plain(cap(fill(s, topic)))
        b.period()
    op = rng.choice(THESIS_OPENERS)
    b.plain(op)
    b.comp("MajorClaim", fill(rng.choice(MAJOR_CLAIMS), topic))
    b.period()
    paragraphs.append((b, []))
    offset += len(b.text) + 1

    n_body = rng.choice([2, 3, 3])
    against_para = rng.random() < 0.45
    for p in range(n_body):
        b = new_para()
        rels = []
        is_against = against_para and p == n_body - 1
        if is_against:
            op = rng.choice(["Admittedly,", "On the other hand,", "Nevertheless,"])
            b.plain(op)
            claim = b.comp("Claim", fill(rng.choice(CLAIMS_AGAINST), topic), stance="Against")
        else:
            op = rng.choice(CLAIM_OPENERS)
            if op:
                b.plain(cap(op))
                claim = b.comp("Claim", fill(rng.choice(CLAIMS_FOR), topic), stance="For")
            else:
                claim = b.comp("Claim", cap(fill(rng.choice(CLAIMS_FOR), topic)), stance="For")
        b.period()
        premises = rng.sample(PREMISES, rng.choice([1, 2, 2, 3]))
        for k, ptxt in enumerate(premises):
            op = rng.choice(PREMISE_OPENERS)
            ptxt = fill(ptxt, topic)
            if op:
                b.plain(op)
                pi = b.comp("Premise", ptxt)
            else:
                pi = b.comp("Premise", cap(ptxt))
            rels.append((pi, claim, "supports"))
            if rng.random() < 0.3:
                b.plain(rng.choice(SERIAL_LINKERS))
                si = b.comp("Premise", fill(rng.choice(PREMISES), topic))
                rels.append((si, pi, "supports"))
            b.period()
        if rng.random() < 0.35 and not is_against:
            op = rng.choice(REBUTTAL_OPENERS)
            b.plain(op)
            ai = b.comp("Premise", fill(rng.choice(ATTACK_PREMISES), topic))
            rels.append((ai, claim, "attacks"))
            b.period()
        if rng.random() < 0.2:
            b.plain(rng.choice(NONARG_BODY))
            b.period()
        paragraphs.append((b, rels))
        offset += len(b.text) + 1

    # conclusion
    b = new_para()
    b.plain(rng.choice(CONCLUSION_OPENERS))
    b.comp("MajorClaim", fill(rng.choice(MAJOR_CLAIMS), topic))
    b.period()
    if rng.random() < 0.4:
        b.plain("Although")
        b.comp("Claim", fill(rng.choice(CLAIMS_AGAINST), topic), stance="Against")
        b.plain(",")
        b.comp("Claim", fill(rng.choice(CLAIMS_FOR), topic), stance="For")
        b.period()
    b.plain(rng.choice(NONARG_CONCLUSION))
    b.period()
    paragraphs.append((b, []))

    text = header + "\n".join(pb.text for pb, _ in paragraphs) + "\n"

    # assign ids
    ann = []
    tid = 0
    aid = 0
    rid = 0
    for pb, rels in paragraphs:
        local_ids = []
        for c in pb.components:
            tid += 1
            local_ids.append("T%d" % tid)
            assert text[c["start"]:c["end"]] == c["text"], (text[c["start"]:c["end"]], c["text"])
            ann.append("T%d\t%s %d %d\t%s" % (tid, c["type"], c["start"], c["end"], c["text"]))
            comps_all.append(dict(c, id="T%d" % tid))
            if c["stance"]:
                aid += 1
                ann.append("A%d\tStance T%d %s" % (aid, tid, c["stance"]))
        for s, t, kind in rels:
            rid += 1
            ann.append("R%d\t%s Arg1:%s Arg2:%s\t" % (rid, kind, local_ids[s], local_ids[t]))
            relations_all.append((local_ids[s], local_ids[t], kind))
    return text, "\n".join(ann) + "\n", comps_all, relations_all


def essay_stats(text, comps, rels):
    lines = text.split("\n")
    paras = []
    pos = len(lines[0]) + 1
    for line in lines[1:]:
        if line.strip():
            paras.append((pos, line))
        pos += len(line) + 1
    n_sent = 0
    n_tok = 0
    for start, line in paras:
        toks = tokenize(line, start)
        n_tok += len(toks)
        n_sent += len(split_sentences(toks))
    types = {c["id"]: c["type"] for c in comps}
    out = {}
    for s, t, _ in rels:
        out[s] = t
    incoming = {}
    for s, t, _ in rels:
        incoming.setdefault(t, []).append(s)

    def depth(node):
        ch = incoming.get(node, [])
        return 0 if not ch else 1 + max(depth(c) for c in ch)

    arguments = [c for c in comps if c["type"] == "Claim" and incoming.get(c["id"])]
    serial = sum(1 for c in arguments if depth(c["id"]) > 1)
    attacked = 0
    for c in arguments:
        stack = list(incoming.get(c["id"], []))
        has_attack = False
        seen = set()
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            for s, t, kind in rels:
                if s == n and kind == "attacks":
                    has_attack = True
            stack.extend(incoming.get(n, []))
        attacked += has_attack
    return {
        "sentences": n_sent,
        "tokens": n_tok,
        "paragraphs": len(paras),
        "components": len(comps),
        "major_claims": sum(1 for c in comps if c["type"] == "MajorClaim"),
        "claims": sum(1 for c in comps if c["type"] == "Claim"),
        "premises": sum(1 for c in comps if c["type"] == "Premise"),
        "claims_for": sum(1 for c in comps if c["stance"] == "For"),
        "claims_against": sum(1 for c in comps if c["stance"] == "Against"),
        "supports": sum(1 for r in rels if r[2] == "supports"),
        "attacks": sum(1 for r in rels if r[2] == "attacks"),
        "arguments": len(arguments),
        "arguments_with_attack": attacked,
        "serial_arguments": serial,
    }


def main():
    rng = random.Random(SEED)
    os.makedirs("essays", exist_ok=True)
    totals = {}
    per_essay = []
    ids = []
    for i in range(1, N_ESSAYS + 1):
        eid = "essay%03d" % i
        text, ann, comps, rels = make_essay(rng, i)
        with open(os.path.join("essays", eid + ".txt"), "w") as f:
            f.write(text)
        with open(os.path.join("essays", eid + ".ann"), "w") as f:
            f.write(ann)
        st = essay_stats(text, comps, rels)
        per_essay.append(st)
        for k, v in st.items():
            totals[k] = totals.get(k, 0) + v
        ids.append(eid)
    totals["essays"] = N_ESSAYS
    test = set(rng.sample(ids, N_TEST))
    with open("split.csv", "w") as f:
        f.write('"ID";"SET"\n')
        for eid in ids:
            f.write('"%s";"%s"\n' % (eid, "TEST" if eid in test else "TRAIN"))
    means = {k: statistics.mean(s[k] for s in per_essay) for k in per_essay[0]}
    with open("expected_stats.json", "w") as f:
        json.dump({"totals": totals, "means": means}, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
