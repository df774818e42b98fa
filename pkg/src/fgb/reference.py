"""Published benchmark numbers, stored as fixtures for the reporting layer.

These are reference values from the original study; they are emitted next
to locally computed results for comparison and are never recomputed here.
"""

# Mean FID per architecture (lower is better).
PUBLISHED_FID = {
    "EBGAN": 380.18,
    "CGAN": 342.59,
    "DCGAN": 326.85,
    "DRAGAN": 317.82,
    "ACGAN": 315.36,
    "WGAN": 307.00,
    "LSGAN": 305.59,
    "WGAN_GP": 295.23,
    "BEGAN": 225.89,
    "STYLEGAN2_ADA": 166.17,
}

PUBLISHED_FID_CONDITIONAL = {"CGAN", "ACGAN", "STYLEGAN2_ADA"}

# Real-vs-synthetic discrimination by clinicians: (acc, sensitivity, specificity).
PUBLISHED_DISCRIMINATION = {
    ("AMD", "clinician_1"): (0.50, 0.50, 0.50),
    ("AMD", "clinician_2"): (0.55, 0.40, 0.70),
    ("NON_AMD", "clinician_1"): (0.60, 0.60, 0.60),
    ("NON_AMD", "clinician_2"): (0.50, 0.40, 0.60),
}

# Best classifier confusion (mixed training, p = 0.6), rows true AMD/NON_AMD.
PUBLISHED_MIXED_CONFUSION = ((90, 15), (21, 84))
PUBLISHED_REAL_ONLY_CONFUSION = ((77, 28), (12, 93))

# Per-architecture best replacement probability and accuracy.
PUBLISHED_BEST_P = {
    "SQUEEZENET": (0.7, 0.81),
    "ALEXNET": (0.2, 0.82),
    "RESNET18": (0.6, 0.83),
}

# Synthetic-only training accuracy band on the real test set.
PUBLISHED_SYNTH_ONLY_BAND = (0.50, 0.55)

# Human-vs-model diagnosis comparison: (acc, sensitivity, specificity).
PUBLISHED_DIAGNOSIS = {
    "clinician_1": (0.80, 0.80, 0.80),
    "clinician_2": (0.75, 1.00, 0.50),
    "model": (0.85, 0.90, 0.80),
}


def fid_ranking() -> list[tuple[str, float]]:
    """Architectures ordered worst (highest FID) to best."""
    return sorted(PUBLISHED_FID.items(), key=lambda kv: -kv[1])
