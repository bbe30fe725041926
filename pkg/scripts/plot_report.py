"""Title-length histograms before and after filtering, from a prepare report.json."""
import json
import sys

import matplotlib.pyplot as plt
import pandas as pd

report_path = sys.argv[1] if len(sys.argv) > 1 else "data/prepared/report.json"
with open(report_path, encoding="utf-8") as f:
    report = json.load(f)

frame = pd.DataFrame({
    "before": pd.Series(report["title_lengths_before"]),
    "after": pd.Series(report["title_lengths_after"]),
}).fillna(0)
frame.index = frame.index.astype(int)
frame = frame.sort_index()

ax = frame.plot.bar(figsize=(8, 4))
ax.set_xlabel("Title tokens")
ax.set_ylabel("Playlists")
ax.set_title(f"Kept {report['kept_count']} of {report['input_count']} playlists")
plt.tight_layout()
plt.savefig(report_path.replace(".json", "_title_lengths.png"))
plt.show()
