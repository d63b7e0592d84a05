#!/usr/bin/env python3
"""Write the default configuration and run the full A -> B -> C path.

Usage: python scripts/run_default.py [outdir]
"""

import json
import sys
from pathlib import Path

from stripwave.cli import default_config_dict, main

outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("waveout")
outdir.mkdir(parents=True, exist_ok=True)
cfg_path = outdir / "config.json"
cfg_path.write_text(json.dumps(default_config_dict(str(outdir)), indent=2))
print(f"config written to {cfg_path}")
raise SystemExit(main(["--verbose", "run", str(cfg_path)]))
