"""Regenerate the bundled synthetic ground-truth chain for the Yulin example."""
from ecoplan.config import bundled_path
from ecoplan.io import write_model
from ecoplan.markov import random_model

if __name__ == "__main__":
    write_model(bundled_path("yulin", "truth_model.csv"), random_model(25, 12, seed=2011, concentration=0.5))
