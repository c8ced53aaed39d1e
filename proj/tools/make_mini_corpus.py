#!/usr/bin/env python3
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        https://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.

"""Writes the synthetic 500-question mini-corpus and its lexicon.

Usage: make_mini_corpus.py OUT_DIR

Output is a pure function of the fixed seed below.
"""

import csv
import random
import sys
from pathlib import Path

SEED = 20210
N_QUESTIONS = 500
MAIN = "Alternative Medicine"
OTHER = "Diet & Fitness"

# theme -> (ingredients, title phrases, theme words)
THEMES = {
    "sleep": (
        ["Melatonin", "Valerian", "Chamomile"],
        ["trouble falling asleep", "insomnia every night", "waking up at 3am"],
        "sleep asleep insomnia night bed tired awake nap dream restless rest wake "
        "bedtime drowsy snore sleepy hours exhausted groggy",
    ),
    "digestion": (
        ["Magnesium", "Probiotics", "Ginger", "Psyllium"],
        ["constipation problems", "an upset stomach after meals", "bloating and gas"],
        "constipation bowel laxative digestion bloating gas diarrhea cramps ibs fiber "
        "nausea colon movement regular digestive indigestion heartburn acid reflux",
    ),
    "throat": (
        ["Honey", "Echinacea", "Zinc", "Elderberry"],
        ["a sore throat", "a bad cold and cough", "losing my voice"],
        "throat sore cough cold flu voice gargle soothe congestion sinus mucus "
        "sneezing fever chest phlegm nasal runny lozenge",
    ),
    "skin": (
        ["Apple Cider Vinegar", "Tea Tree Oil", "Aloe Vera"],
        ["acne on my face", "dry itchy skin", "dark spots and wrinkles"],
        "skin acne face pimples itchy rash wrinkles cream spots facial oily pores "
        "blackheads scar eczema moisturizer breakout complexion",
    ),
    "weight": (
        ["Acai", "Garcinia Cambogia", "Green Tea"],
        ["losing weight fast", "burning belly fat", "cutting calories"],
        "weight lose pounds diet fat belly workout metabolism calories appetite "
        "gym slim burn exercise cardio shed loss",
    ),
    "mood": (
        ["St John's Wort", "Kava", "5-HTP"],
        ["anxiety and panic attacks", "feeling depressed", "stress at work"],
        "anxiety depression mood panic stress calm nervous antidepressant worry "
        "depressed sad therapy zoloft ssri withdrawal relax",
    ),
    "heart": (
        ["Iron", "Fish Oil", "Garlic", "CoQ10"],
        ["high blood pressure", "high cholesterol", "low iron levels"],
        "blood pressure cholesterol heart anemia level levels circulation artery "
        "pulse cardiovascular triglycerides hypertension statin doctor normal",
    ),
    "thyroid": (
        ["Iodine", "Kelp", "Selenium"],
        ["an underactive thyroid", "hypothyroidism symptoms", "thyroid medication"],
        "thyroid hypothyroidism synthroid levothyroxine hormone gland tsh "
        "hyperthyroidism underactive endocrinologist goiter metabolism",
    ),
    "infection": (
        ["Cranberry", "Oregano Oil", "Goldenseal"],
        ["a bladder infection", "a yeast infection", "an infection that will not clear"],
        "infection bladder yeast urinary antibiotic bacteria kill treat fungal "
        "antibiotics uti burning parasite antibacterial bacterial",
    ),
    "dose": (
        ["Biotin", "Vitamin D", "Vitamin B12"],
        ["the right dose", "how many milligrams to take", "capsule versus tablet"],
        "dose dosage mcg milligrams capsule tablet daily iu strength 1000 5000 "
        "recommended label softgel brand serving absorption",
    ),
    "smoking": (
        ["Damiana", "Salvia", "Mullein"],
        ["smoking it in a pipe", "quitting cigarettes", "what it feels like smoked"],
        "smoke smoking cigarette pipe tobacco legal smoked bowl roll blend smoker "
        "quit nicotine hookah inhale herbal",
    ),
    "joints": (
        ["Glucosamine", "Copper", "Turmeric"],
        ["arthritis pain in my knees", "stiff joints", "gout flare ups"],
        "arthritis joint joints knee knees pain stiff gout inflammation cartilage "
        "rheumatoid swelling bracelet ache back sore",
    ),
}

# Ingredients that the lexicon cleaning should drop.
EVERYDAY = ["Water", "Wine", "Caffeine"]
BODY_PARTS = ["Brain", "Stomach"]
RECREATIONAL = ["Marijuana", "Poppy Seed"]
RARE = ["Yohimbe", "Noni"]

FILLER = (
    "anyone know help natural remedy work works really good best safe side "
    "effects try tried taking take anybody heard suggest recommend long time "
    "week weeks month months year years started started using use used wondering "
    "question advice thing things better worse bad problem problems since "
    "always never lot little bit day days morning evening"
).split()

STOP_GLUE = ["i", "have", "been", "the", "a", "and", "it", "my", "to", "is", "for", "of", "with", "me", "but"]

TITLES = [
    "Does {ing} help with {phrase}?",
    "{ing} for {phrase}?",
    "Has anyone used {ing} for {phrase}",
    "Is {ing} safe to take for {phrase}?",
    "Question about {ing} and {phrase}",
]


def sentence(rng, words, n):
    out = []
    for _ in range(n):
        out.append(rng.choice(words))
        if rng.random() < 0.35:
            out.append(rng.choice(STOP_GLUE))
    s = " ".join(out)
    return s[0].upper() + s[1:] + rng.choice([".", "?", "!", "..."])


def question(rng, qid, theme_name):
    ingredients, phrases, words = THEMES[theme_name]
    words = words.split()
    ing = rng.choice(ingredients)
    title = rng.choice(TITLES).format(ing=ing, phrase=rng.choice(phrases))
    parts = []
    for _ in range(rng.randint(2, 3)):
        mix = [rng.choice(words) for _ in range(5)] + [rng.choice(FILLER) for _ in range(3)]
        parts.append(sentence(rng, mix, rng.randint(4, 7)))
    # Occasional second ingredient, from any theme or the cleaning lists.
    r = rng.random()
    if r < 0.15:
        other = rng.choice(list(THEMES))
        parts.append("I also take " + rng.choice(THEMES[other][0]).lower() + ".")
    elif r < 0.25:
        parts.append("I usually have it with " + rng.choice(EVERYDAY + BODY_PARTS).lower() + ".")
    # Most questions carry a near-universal word the document-frequency
    # filter removes.
    if rng.random() < 0.92:
        parts.append("Thanks for any supplement tips.")
    if rng.random() < 0.05:
        parts.append("I read about it at http://example.com/" + theme_name + " and www.example.org/faq.")
    return {"id": qid, "title": title, "body": " ".join(parts)}


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    themes = list(THEMES)
    rows = []
    truth = []
    for k in range(N_QUESTIONS):
        qid = "q%04d" % (k + 1)
        sub = OTHER if rng.random() < 0.06 else MAIN
        u = rng.random()
        if u < 0.03:
            # No ingredient at all.
            q = {"id": qid, "title": "Natural way to feel better?",
                 "body": sentence(rng, FILLER, 8)}
            theme = "none"
        elif u < 0.06:
            drug = rng.choice(RECREATIONAL)
            q = {"id": qid, "title": "Is %s a natural remedy?" % drug,
                 "body": sentence(rng, FILLER + THEMES["smoking"][2].split(), 8)}
            theme = "recreational"
        elif u < 0.075:
            q = {"id": qid, "title": "Anyone tried %s?" % rng.choice(RARE),
                 "body": sentence(rng, FILLER, 8)}
            theme = "rare"
        else:
            theme = themes[rng.randrange(len(themes))]
            q = question(rng, qid, theme)
        if rng.random() < 0.04:
            # Exercise quoting: embedded comma, quote and line break.
            q["body"] = q["body"] + '\nEdit: "update", still looking.'
        rows.append({"id": q["id"], "subcategory": sub, "title": q["title"], "body": q["body"]})
        truth.append((qid, theme))

    with open(out / "questions.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["id", "subcategory", "title", "body"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    with open(out / "themes.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "theme"])
        w.writerows(truth)

    names = []
    for ingredients, _, _ in THEMES.values():
        names += ingredients
    names += EVERYDAY + BODY_PARTS + RECREATIONAL + RARE
    lines = ["# Synthetic ingredient lexicon for the mini-corpus.", "", "[preferred]"]
    lines += names
    lines += ["", "[exclude.everyday_food_drink]"] + EVERYDAY + ["fruit", "vegetable"]
    lines += ["", "[exclude.body_parts]"] + BODY_PARTS + ["adrenal cortex"]
    lines += ["", "[exclude.recreational_drugs]"] + RECREATIONAL
    (out / "lexicon.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
