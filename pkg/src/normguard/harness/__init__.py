"""Dataset generation, reference oracles and batch evaluation."""
