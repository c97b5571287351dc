#!/usr/bin/env python3
"""Generate data/pima.csv, a seeded synthetic stand-in for the Pima Indians
diabetes table (768 rows, 9 numeric columns).

Column layout, class balance (500 / 268) and the number of zero sentinels in
Gluc, BP, Thick, Insul and BMI (5, 35, 227, 374, 11) follow the public UCI
file; the values themselves are simulated.
"""
import random

ROWS_NEG, ROWS_POS = 500, 268
ZEROS = {"Gluc": 5, "BP": 35, "Thick": 227, "Insul": 374, "BMI": 11}
COLS = ["NPreg", "Gluc", "BP", "Thick", "Insul", "BMI", "Genet", "Age", "Diab"]


def clamp(x, lo, hi):
    return max(lo, min(hi, x))


def row(rng, diab):
    pos = diab == 1
    age = int(clamp(rng.gammavariate(2.0, 6.5 if pos else 5.0) + 21, 21, 81))
    npreg = int(clamp(rng.gauss(4.9 if pos else 3.3, 3.5), 0, 17))
    gluc = int(clamp(rng.gauss(141 if pos else 110, 30 if pos else 25), 44, 199))
    bp = int(clamp(rng.gauss(75 if pos else 70, 12), 24, 122))
    thick = int(clamp(rng.gauss(33 if pos else 27, 10), 7, 99))
    insul = int(clamp(rng.lognormvariate(5.1 if pos else 4.7, 0.6), 14, 846))
    bmi = round(clamp(rng.gauss(35.4 if pos else 31.0, 6.5), 18.2, 67.1), 1)
    genet = round(clamp(rng.lognormvariate(-0.8 if pos else -1.0, 0.55), 0.078, 2.42), 3)
    return {"NPreg": npreg, "Gluc": gluc, "BP": bp, "Thick": thick, "Insul": insul,
            "BMI": bmi, "Genet": genet, "Age": age, "Diab": diab}


def main():
    rng = random.Random(20170601)
    labels = [0] * ROWS_NEG + [1] * ROWS_POS
    rng.shuffle(labels)
    rows = [row(rng, d) for d in labels]
    for col, count in ZEROS.items():
        for i in rng.sample(range(len(rows)), count):
            rows[i][col] = 0
    with open("data/pima.csv", "w", newline="\n") as f:
        f.write(",".join(COLS) + "\n")
        for r in rows:
            f.write(",".join(str(r[c]) for c in COLS) + "\n")


if __name__ == "__main__":
    main()
