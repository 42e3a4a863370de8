# Copyright 2026 The ToXCL Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Runs a stub evaluation through the CLI and validates report.json against
the published schema."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    cli, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        preds = tmp / "predictions.jsonl"
        rows = [
            {"id": "a", "gold_label": 1, "pred_label": 1,
             "gold_explanation": "women are inferior", "pred_explanation": "women are inferior"},
            {"id": "b", "gold_label": 0, "pred_label": 1,
             "gold_explanation": "[None]", "pred_explanation": "they are bad"},
            {"id": "c", "gold_label": 0, "pred_label": 0,
             "gold_explanation": "[None]", "pred_explanation": "[None]"},
        ]
        preds.write_text("".join(json.dumps(r) + "\n" for r in rows))
        subprocess.run([cli, "--set", f"paths.output_dir={tmp / 'run'}", "evaluate",
                        "--predictions", str(preds), "--out", str(tmp / "report")],
                       check=True, stdout=subprocess.DEVNULL)
        report = json.loads((tmp / "report" / "report.json").read_text())
        jsonschema.validate(report, schema)
        expected_accuracy = 200.0 / 3.0
        if abs(report["accuracy"] - expected_accuracy) > 1e-9:
            print(f"accuracy {report['accuracy']} != {expected_accuracy}")
            return 1
    print("report.json validates")
    return 0


if __name__ == "__main__":
    sys.exit(main())
