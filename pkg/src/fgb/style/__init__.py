from .config import StyleConfig, AdaState, external_preset
from .net import (
    MappingNetwork,
    StyleGenerator,
    StyleDiscriminator,
    modulated_conv,
    normalize_latent,
)
from .ada import ada_update, augment_pipeline
from .export import export_external_config, load_external_config
from .train import StyleCheckpoint, StyleHistory, train_style_toy, generate_style

__all__ = [
    "StyleConfig",
    "AdaState",
    "external_preset",
    "MappingNetwork",
    "StyleGenerator",
    "StyleDiscriminator",
    "modulated_conv",
    "normalize_latent",
    "ada_update",
    "augment_pipeline",
    "export_external_config",
    "load_external_config",
    "StyleCheckpoint",
    "StyleHistory",
    "train_style_toy",
    "generate_style",
]
