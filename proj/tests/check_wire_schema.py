"""Validate NDJSON wire frames against docs/wire-schema.json.

Also checks that the schema rejects a handful of frames the decoder rejects.
"""

import json
import sys

import jsonschema


def main(schema_path, frames_path):
    with open(schema_path) as f:
        validator = jsonschema.Draft202012Validator(json.load(f))
    bad = 0
    count = 0
    with open(frames_path) as f:
        for n, line in enumerate(f, 1):
            if not line.strip():
                continue
            count += 1
            for err in validator.iter_errors(json.loads(line)):
                bad += 1
                print(f"line {n}: {err.message}\n  {line.strip()[:200]}")
    if count == 0:
        print("no frames to check")
        return 1

    rejected = [
        {"op": "dance", "seq": 1, "payload": {}},
        {"op": "hello", "payload": {}},
        {"op": "hello", "seq": -1, "payload": {}},
        {"op": "hello", "seq": 1, "payload": {}, "x": 1},
        {"op": "hello", "seq": 1, "payload": {"role": "admin"}},
        {"op": "action", "seq": 1, "payload": {"type": "answer"}},
        {"op": "action", "seq": 1, "payload": {"type": "dance"}},
        {"op": "effect", "seq": 1, "payload": {"kind": "face", "au": {"1": 2.0}}},
        {"op": "error", "seq": 1, "payload": {"code": "NOPE", "message": ""}},
    ]
    for frame in rejected:
        if validator.is_valid(frame):
            bad += 1
            print(f"schema accepts an invalid frame: {json.dumps(frame)}")

    print(f"{count} frames checked, {bad} problems")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
