import sys

import matplotlib.pyplot as plt
import pandas as pd

paths = sys.argv[1:] or ["runs/default/trainlog.jsonl"]
for path in paths:
    df = pd.read_json(path, lines=True)
    plt.plot(df["epoch"], df["train_nll"], linestyle="--", label=f"{path} train")
    plt.plot(df["epoch"], df["val_nll"], label=f"{path} val")
plt.xlabel("Epoch")
plt.ylabel("NLL per token")
plt.title("Training curves")
plt.legend()
plt.grid(True)
plt.show()
