#!/usr/bin/env python3
"""Generate the bundled desk corpus: small, conventionally formatted Java and
Python programs written out as one JSON object per line.

    python3 scripts/gen_desk_corpus.py [--seed 7] [--out data/corpus/desk.jsonl]
"""

import argparse
import json
import random
from pathlib import Path

WORDS = [
    "total", "sum", "count", "item", "value", "result", "index", "max", "min",
    "current", "next", "word", "list", "node", "buffer", "line", "score",
    "temp", "left", "right", "num", "prev", "start", "end", "size", "data",
    "key", "sorted", "input", "output", "first", "last", "lst", "row", "col",
    "name", "text", "char", "step", "limit", "target", "pair", "entry",
]


class Names:
    def __init__(self, rng, camel):
        self.rng = rng
        self.camel = camel
        self.used = set()

    def __call__(self, parts=2):
        while True:
            ws = self.rng.sample(WORDS, parts)
            if self.camel:
                name = ws[0] + "".join(w.capitalize() for w in ws[1:])
            else:
                name = "_".join(ws)
            if name not in self.used:
                self.used.add(name)
                return name

    def many(self, k, parts=2):
        return [self(parts) for _ in range(k)]


def cls_name(rng):
    return "".join(w.capitalize() for w in rng.sample(WORDS, 2))


# Java -----------------------------------------------------------------

def j_sum(rng, n):
    c, f, a, t = cls_name(rng), n(), n(), n()
    return f"""public class {c} {{
    public static int {f}(int[] {a}) {{
        int {t} = 0;
        for (int i = 0; i < {a}.length; i++) {{
            {t} += {a}[i];
        }}
        return {t};
    }}
}}
"""


def j_join(rng, n):
    c, f, words, sb, w = cls_name(rng), n(), n(), n(), n()
    return f"""import java.util.*;

public class {c} {{
    public String {f}(List<String> {words}) {{
        StringBuilder {sb} = new StringBuilder();
        for (String {w} : {words}) {{
            {sb}.append({w}).append(" ");
        }}
        return {sb}.toString().trim();
    }}
}}
"""


def j_factorial(rng, n):
    c, helper, arg = cls_name(rng), n(), n()
    return f"""public class {c} {{
    static long factorial(int n) {{
        return n <= 1 ? 1 : n * factorial(n - 1);
    }}

    public long {helper}(int {arg}) {{
        {c} q = new {c}();
        return q.factorial({arg}) + q.factorial(({arg} - 1));
    }}
}}
"""


def j_average(rng, n):
    c, f, nums, run, x = cls_name(rng), n(), n(), n(), n()
    return f"""public class {c} {{
    public double {f}(int[] {nums}) {{
        if ({nums}.length == 0) {{
            return 0.0;
        }}
        long {run} = 0;
        for (int {x} : {nums}) {{
            {run} += {x};
        }}
        return ((double) {run}) / {nums}.length;
    }}
}}
"""


def j_valid(rng, n):
    c, f, s, lim = cls_name(rng), n(), n(), n()
    return f"""public class {c} {{
    private static final int MAX_LENGTH = 80;

    public boolean {f}(String {s}, int {lim}) {{
        if (!({s} == null || {s}.isEmpty())) {{
            return {s}.trim().length() <= Math.min({lim}, MAX_LENGTH);
        }}
        return false;
    }}
}}
"""


def j_counts(rng, n):
    c, f, text, counts, w = cls_name(rng), n(), n(), n(), n()
    return f"""import java.util.HashMap;
import java.util.Map;

public class {c} {{
    public Map<String, Integer> {f}(String {text}) {{
        Map<String, Integer> {counts} = new HashMap<>();
        for (String {w} : {text}.toLowerCase().split(" ")) {{
            {counts}.put({w}, {counts}.getOrDefault({w}, 0) + 1);
        }}
        return {counts};
    }}
}}
"""


def j_reverse(rng, n):
    c, f, arr, lo, hi, tmp = cls_name(rng), n(), n(), n(), n(), n()
    return f"""public class {c} {{
    public void {f}(int[] {arr}) {{
        int {lo} = 0;
        int {hi} = {arr}.length - 1;
        while ({lo} < {hi}) {{
            int {tmp} = {arr}[{lo}];
            {arr}[{lo}++] = {arr}[{hi}];
            {arr}[{hi}--] = {tmp};
        }}
    }}
}}
"""


def j_stream(rng, n):
    c, f, items, th = cls_name(rng), n(), n(), n()
    return f"""import java.util.List;
import java.util.stream.*;

public class {c} {{
    public long {f}(List<Integer> {items}, int {th}) {{
        return {items}.stream().filter(x -> x > {th}).count();
    }}
}}
"""


def j_fields(rng, n):
    c, fa, fb, g = cls_name(rng), n(), n(), n()
    return f"""public class {c} {{
    private int {fa};
    private String {fb};

    public {c}(int {fa}, String {fb}) {{
        this.{fa} = {fa};
        this.{fb} = {fb};
    }}

    public int {g}() {{
        return {fa} * 2;
    }}

    @Override
    public String toString() {{
        return String.format("%s:%d", {fb}, ({fa}));
    }}
}}
"""


def j_search(rng, n):
    c, f, arr, key, lo, hi, mid = cls_name(rng), n(), n(), n(), n(), n(), n()
    return f"""public class {c} {{
    public int {f}(int[] {arr}, int {key}) {{
        int {lo} = 0, {hi} = {arr}.length - 1;
        while ({lo} <= {hi}) {{
            int {mid} = ({lo} + {hi}) >>> 1;
            if ({arr}[{mid}] == {key}) {{
                return {mid};
            }} else if ({arr}[{mid}] < {key}) {{
                {lo} = {mid} + 1;
            }} else {{
                {hi} = {mid} - 1;
            }}
        }}
        return -1;
    }}
}}
"""


def j_matrix(rng, n):
    c, f, m, rows, cols = cls_name(rng), n(), n(), n(), n()
    return f"""public class {c} {{
    public int[][] {f}(int[][] {m}) {{
        int {rows} = {m}.length, {cols} = {m}[0].length;
        int[][] out = new int[{cols}][{rows}];
        for (int i = 0; i < {rows}; i++) {{
            for (int j = 0; j < {cols}; j++) {{
                out[j][i] = {m}[i][j];
            }}
        }}
        return out;
    }}
}}
"""


def j_maxpair(rng, n):
    c, f, a, b, best = cls_name(rng), n(), n(), n(), n()
    return f"""public class {c} {{
    public int {f}(int {a}, int {b}) {{
        int {best} = Math.max(Math.abs({a}), Math.abs({b}));
        System.out.println(String.valueOf({best}).length());
        return {best};
    }}
}}
"""


JAVA = [j_sum, j_join, j_factorial, j_average, j_valid, j_counts, j_reverse,
        j_stream, j_fields, j_search, j_matrix, j_maxpair]


# Python ---------------------------------------------------------------

def p_sum(rng, n):
    f, xs, t, x = n(), n(), n(), n()
    return f"""def {f}({xs}):
    {t} = 0
    for {x} in {xs}:
        {t} += {x}
    return {t}
""", [f"assert {f}([1, 2, 3]) == 6\n"]


def p_slices(rng, n):
    f, items, head, tail = n(), n(), n(), n()
    return f"""def {f}({items}):
    {head} = {items}[:-1]
    {tail} = {items}[-1]
    return {items}[::-1], {head}, {tail}
""", None


def p_counts(rng, n):
    f, text, counts, w = n(), n(), n(), n()
    return f"""def {f}({text}):
    {counts} = {{}}
    for {w} in {text}.lower().split():
        {counts}[{w}] = {counts}.get({w}, 0) + 1
    return sorted({counts}.items(), key=lambda kv: (-kv[1], kv[0]))
""", [f"assert {f}('a b a')[0] == ('a', 2)\n"]


def p_grid(rng, n):
    f, rows, cols, grid = n(), n(), n(), n()
    return f"""def {f}({rows}, {cols}):
    {grid} = [[0] * {cols} for _ in range({rows})]
    for i in range({rows}):
        {grid}[i][i % {cols}] = 1
    {grid}[-1][0] = {grid}[0][-1]
    return {grid}
""", None


def p_guard(rng, n):
    f, a, b = n(), n(), n()
    return f"""def {f}({a}, {b}):
    if not ({a} or {b}):
        return None
    return max(abs(-{a}), abs({b}[0]) if {b} else 0)
""", None


def p_nested(rng, n):
    f, rows, longest = n(), n(), n()
    return f"""def {f}({rows}):
    {longest} = 0
    for row in {rows}:
        {longest} = max({longest}, len(row[0]))
    print(len({rows}[0]))
    return {longest}
""", None


def p_class(rng, n):
    c, a, m = cls_name(rng), n(), n()
    return f"""class {c}:
    def __init__(self, {a}):
        self.{a} = list({a})

    def {m}(self):
        return [x * 2 for x in self.{a}[1:]]
""", None


def p_math(rng, n):
    f, pts, d = n(), n(), n()
    return f"""import math


def {f}({pts}):
    {d} = []
    for (x1, y1), (x2, y2) in zip({pts}, {pts}[1:]):
        {d}.append(math.sqrt((x2 - x1) ** 2 + (y2 - y1) ** 2))
    return sum({d})
""", None


def p_matrix(rng, n):
    f, m, total = n(), n(), n()
    return f"""def {f}({m}):
    {total} = 0
    for i in range(len({m})):
        for j in range(len({m}[i])):
            {total} += {m}[i][j] * (-1) ** (i + j)
    return {total}
""", None


def p_stack(rng, n):
    f, text, stack, pairs = n(), n(), n(), n()
    return f"""MAX_DEPTH = 64


def {f}({text}):
    {stack} = []
    {pairs} = {{')': '(', ']': '['}}
    for ch in {text}:
        if ch in '([':
            {stack}.append(ch)
        elif ch in {pairs}:
            if not {stack} or {stack}.pop() != {pairs}[ch]:
                return False
    return not {stack} and len({text}) < MAX_DEPTH
""", None


def p_window(rng, n):
    f, xs, k, best = n(), n(), n(), n()
    return f"""def {f}({xs}, {k}):
    {best} = sum({xs}[:{k}])
    for i in range({k}, len({xs})):
        {best} = max({best}, sum({xs}[i - {k} + 1:i + 1]))
    return {best}
""", None


def p_fmt(rng, n):
    f, name, score = n(), n(), n()
    return f"""def {f}({name}, {score}=0):
    label = '{{}}: {{}}'.format({name}.strip(), round({score}, 2))
    return label.upper()
""", None


def p_pairs(rng, n):
    f, xs, pairs, limit = n(), n(), n(), n()
    return f"""def {f}({xs}, {limit}=3):
    {pairs} = list(zip({xs}[::2], {xs}[1::2]))
    return dict([(k, v) for k, v in {pairs}][:{limit}])
""", None


PYTHON = [p_pairs, p_sum, p_slices, p_counts, p_grid, p_guard, p_nested, p_class,
          p_math, p_matrix, p_stack, p_window, p_fmt]


def generate(seed, per_language):
    rng = random.Random(seed)
    records = []
    for k in range(per_language):
        n = Names(rng, camel=True)
        tmpl = JAVA[k % len(JAVA)]
        records.append({"id": f"java-{k:03d}", "language": "java", "source": tmpl(rng, n)})
    for k in range(per_language):
        n = Names(rng, camel=False)
        tmpl = PYTHON[k % len(PYTHON)]
        source, patches = tmpl(rng, n)
        rec = {"id": f"python-{k:03d}", "language": "python", "source": source}
        if patches:
            rec["patches"] = patches
        records.append(rec)
    return records


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--per-language", type=int, default=200)
    ap.add_argument("--out", default="data/corpus/desk.jsonl")
    args = ap.parse_args()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as fh:
        for rec in generate(args.seed, args.per_language):
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
