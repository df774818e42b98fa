"""Fundus GAN benchmark toolkit.

Subpackages:
    data      -- dataset ingestion, retina localization, crop chain, splits
    gans      -- the nine-variant adversarial generator zoo
    style     -- reduced-scale style generator + external trainer adapter
    fid       -- Frechet Inception Distance
    classify  -- synthetic-mix classifier training and evaluation
    explain   -- Grad-CAM heatmaps
    study     -- blinded reader study service
"""

__version__ = "0.1.0"
