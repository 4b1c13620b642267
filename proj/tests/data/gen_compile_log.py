"""Writes compile_mixed.log (200 lines) and the diagnostics an independent
regex oracle extracts from it. Rerun only to regenerate the frozen fixture."""
import json
import pathlib
import random
import re

HERE = pathlib.Path(__file__).parent
rng = random.Random(1207)

GRAMMAR = re.compile(r"^(.+)\((\d+),(\d+)\): (error|warning) ([A-Z]{2}[0-9]{4}): (.*)$")

paths = [
    "Assets/Runtime/PlayerController.cs",
    "Assets/Editor/SceneBuilder.cs",
    "/home/dev/My Game/Assets/Runtime/Coin (1).cs",
    "C:\\Users\\dev\\Proj\\Assets\\Runtime\\GameManager.cs",
    "Assets/Runtime/Hud: Controller.cs",
]
messages = [
    "The name 'jumpForse' does not exist in the current context",
    "; expected",
    "Cannot implicitly convert type 'int' to 'string'. An explicit conversion exists (are you missing a cast?)",
    "The variable 'x' is assigned but its value is never used",
    "'GameObject' does not contain a definition for 'Foo': check (1,2): error CS0000: nested",
    "",
    "Unicode identifier 'café' is fine",
]
noise = [
    "Refreshing native plugins compatible for Editor in 1.03 ms, found 0 plugins.",
    "UnityEngine.Debug:Log (object)",
    "(Filename: Assets/Runtime/PlayerController.cs Line: 12)",
    "Assembly-CSharp.dll compilation failed",
    "",
    "  at UniGen.Generated.SceneBuilder.Build () [0x00000] in <filename unknown>:0",
    "Assets/Runtime/A.cs(12,5): error cs0103: lowercase code",
    "Assets/Runtime/A.cs(12,5): error CS010: short code",
    "Assets/Runtime/A.cs(12,5): Error CS0103: capital severity",
    "Assets/Runtime/A.cs(12,5): info CS0103: unknown severity",
    "Assets/Runtime/A.cs(12): error CS0103: no column",
    "Assets/Runtime/A.cs(012,5): error CS0103: leading zero",
    "Assets/Runtime/A.cs(12,0): error CS0103: zero column",
    "Assets/Runtime/A.cs(0,4): error CS0103: zero line",
    " Assets/Runtime/A.cs(12,5) : error CS0103: space before colon",
    "Assets/Runtime/A.cs(12,5): error CS0103 missing colon",
    "(12,5): error CS0103: no file",
    "Assets/Runtime/A.cs(12,5): warning CS01030: long code",
]


def valid_line():
    return "{}({},{}): {} {}{:04d}: {}".format(
        rng.choice(paths), rng.randint(1, 4000), rng.randint(1, 160), rng.choice(["error", "warning"]),
        rng.choice(["CS", "UN", "BC"]), rng.randint(0, 9999), rng.choice(messages))


def accepted(line):
    m = GRAMMAR.match(line)
    if not m:
        return None
    if any(g.startswith("0") for g in (m.group(2), m.group(3))):
        return None
    return {"file": m.group(1), "line": int(m.group(2)), "column": int(m.group(3)),
            "severity": m.group(4), "code": m.group(5), "message": m.group(6), "source": line}


lines = [valid_line() if rng.random() < 0.45 else rng.choice(noise) for _ in range(200)]
raw = "".join(line + ("\r\n" if i % 7 == 3 else "\n") for i, line in enumerate(lines))
(HERE / "compile_mixed.log").write_bytes(raw.encode("utf-8"))
expected = [d for d in map(accepted, lines) if d]
(HERE / "compile_mixed.expected.json").write_text(json.dumps(expected, indent=1, ensure_ascii=False) + "\n",
                                                  encoding="utf-8")
print(len(lines), "lines,", len(expected), "diagnostics")
