"""Sample kurtosis of a draw dump (one value per line), via scipy.

usage: python3 kurtosis_check.py levy.txt uniform.txt
"""
import sys

import numpy as np
from scipy.stats import kurtosis

for path in sys.argv[1:]:
    x = np.loadtxt(path)
    print(f"{path}: n={x.size} pearson={kurtosis(x, fisher=False):.4f} excess={kurtosis(x):.4f}")
