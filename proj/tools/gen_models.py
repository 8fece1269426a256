#!/usr/bin/env python3
"""Regenerates the bundled model files whose transducers are tedious by hand."""
import itertools
import os
import sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "models")


def emit(path, header, trans, initial, accepting):
    lines = header + ["transducer:", "initial: " + " ".join(initial), "accepting: " + " ".join(accepting)]
    for (p, letter, q) in sorted(set(trans)):
        lines.append("trans: %s (%s) %s" % (p, ",".join(letter), q))
    with open(os.path.join(OUT, path), "w") as f:
        f.write("\n".join(lines) + "\n")


def russian():
    # letters name the owner of a card; agent x (a=1, b=2, c=3) considers
    # every deal that gives it the same cards, the other positions see all
    sigma = ["A", "B", "C"]
    agents = {"A": 1, "B": 2, "C": 3}
    trans, initial, accepting = [], [], []
    for x, pos in agents.items():
        pairs = [(s, t) for s in sigma for t in sigma if (s == x) == (t == x)]
        initial.append("%s0" % x)
        accepting.append("%sF" % x)
        for k in range(pos):
            for s, t in pairs:
                trans.append(("%s%d" % (x, k), (s, "0", t), "%s%d" % (x, k + 1)))
        for s, t in pairs:
            trans.append(("%s%d" % (x, pos), (s, "1", t), "%sF" % x))
            trans.append(("%sF" % x, (s, "0", t), "%sF" % x))
    initial.append("I0")
    accepting.append("IF")
    for s in sigma:
        trans.append(("I0", (s, "1", s), "IF"))
        for k in range(5):
            trans.append(("I%d" % k, (s, "0", s), "I%d" % min(k + 1, 4)))
        trans.append(("I4", (s, "1", s), "IF"))
        trans.append(("IF", (s, "0", s), "IF"))
    header = [
        "# Russian cards: position i is card i, its letter names the holder.",
        "# Agents a, b, c sit at positions 1, 2, 3 and know exactly their own hand;",
        "# every other position is omniscient.",
        "alphabet: A B C",
        "props: A = {a}; B = {b}; C = {c}",
        "agents: a=1 b=2 c=3",
    ]
    emit("russian.kripke", header, trans, initial, accepting)


def highest():
    # a letter is (a-bit, b-bit); a number is the length of the 1-prefix of its track
    sigma = ["00", "01", "10", "11"]

    def step(state, letter):
        # state: (a still in ones, b still in ones, tracks differed); None = invalid
        a1, b1, diff = state
        a, b = int(letter[0]), int(letter[1])
        if (a and not a1) or (b and not b1):
            return None
        return (a1 and bool(a), b1 and bool(b), diff or a != b)

    valid0 = (True, True, False)
    vstates = [(x, y, z) for x in (True, False) for y in (True, False) for z in (True, False)]

    def name(v):
        return "".join("1" if b else "0" for b in v)

    trans, initial, accepting = [], [], []
    # agent 0 keeps the a-track, agent 1 the b-track; k counts positions before obs
    for agent, pos in (("a", 0), ("b", 1)):
        for vs, vt in itertools.product(vstates, repeat=2):
            for phase in range(pos + 2):
                q = "%s%d_%s_%s" % (agent, phase, name(vs), name(vt))
                for s in sigma:
                    for t in sigma:
                        keep = 0 if agent == "a" else 1
                        if s[keep] != t[keep]:
                            continue
                        ns, nt = step(vs, s), step(vt, t)
                        if ns is None or nt is None:
                            continue
                        if phase < pos:
                            trans.append((q, (s, "0", t), "%s%d_%s_%s" % (agent, phase + 1, name(ns), name(nt))))
                        elif phase == pos:
                            trans.append((q, (s, "1", t), "%s%d_%s_%s" % (agent, pos + 1, name(ns), name(nt))))
                        else:
                            trans.append((q, (s, "0", t), "%s%d_%s_%s" % (agent, phase, name(ns), name(nt))))
                if phase == pos + 1 and vs[2] and vt[2]:
                    accepting.append(q)
        initial.append("%s0_%s_%s" % (agent, name(valid0), name(valid0)))
    # everybody else is omniscient
    for v in vstates:
        for phase in range(4):
            q = "i%d_%s" % (phase, name(v))
            for s in sigma:
                n = step(v, s)
                if n is None:
                    continue
                if phase < 2:
                    trans.append((q, (s, "0", s), "i%d_%s" % (phase + 1, name(n))))
                elif phase == 2:
                    trans.append((q, (s, "0", s), "i2_%s" % name(n)))
                    trans.append((q, (s, "1", s), "i3_%s" % name(n)))
                else:
                    trans.append((q, (s, "0", s), "i3_%s" % name(n)))
            if phase == 3 and v[2]:
                accepting.append(q)
    initial.append("i0_%s" % name(valid0))
    header = [
        "# Highest number: a letter is an (a, b) bit pair; each number is the length",
        "# of the 1-prefix of its track, and the two numbers differ.",
        "# Agent 0 sees the a-track, agent 1 the b-track, the others see everything.",
        "alphabet: 00 01 10 11",
        "props: 00 = {}; 01 = {b}; 10 = {a}; 11 = {a, b}",
    ]
    emit("highest.kripke", header, trans, initial, accepting)


def muddy_abs():
    # counting abstraction over c*m*: the last clean child may flip to muddy,
    # the first muddy child may flip to clean
    trans = []
    for x in "mc":
        trans += [("I", (x, "0", x), "I"), ("I", (x, "1", x), "J"), ("J", (x, "0", x), "J")]
    trans += [("C", ("c", "0", "c"), "C"), ("C", ("c", "1", "m"), "D"), ("C", ("m", "1", "c"), "D"), ("D", ("m", "0", "m"), "D")]
    header = [
        "# Muddy children under the counting abstraction: states c^x m^y.",
        "# The clean child at the boundary may be muddy, the muddy child at the",
        "# boundary may be clean; everyone else only considers the actual state.",
        "alphabet: m c",
        "props: m = {m}; c = {}",
    ]
    emit("muddy_abs.kripke", header, trans, ["I", "C"], ["J", "D"])


if __name__ == "__main__":
    which = sys.argv[1:] or ["russian", "highest", "muddy_abs"]
    for w in which:
        globals()[w]()
