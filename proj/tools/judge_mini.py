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

"""Writes simulated relevance judgments for the mini-corpus.

Usage: judge_mini.py REPORT_TOPICS_CSV THEMES_CSV OUT

A top question counts as correct when its generated theme matches the
theme given for the topic below.
"""

import csv
import sys

TOPIC_THEME = {0: "skin", 1: "heart", 2: "sleep", 3: "joints", 8: "digestion", 11: "infection"}


def main():
    if len(sys.argv) != 4:
        sys.exit(__doc__)
    with open(sys.argv[2], newline="") as f:
        truth = {r["id"]: r["theme"] for r in csv.DictReader(f)}
    lines = ["# topic, question id, correct (1) or not (0)"]
    with open(sys.argv[1], newline="") as f:
        for row in csv.DictReader(f):
            topic = int(row["topic"])
            if topic not in TOPIC_THEME:
                continue
            for qid in row["questions"].split(";"):
                ok = truth[qid] == TOPIC_THEME[topic]
                lines.append("%d, %s, %d" % (topic, qid, int(ok)))
    with open(sys.argv[3], "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
