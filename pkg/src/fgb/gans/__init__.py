from .spec import GanSpec, GanVariant, TrainConfig, TrainHistory
from .losses import LossAux, discriminator_loss, generator_loss, began_update_k
from .penalty import PenaltyMode, gradient_penalty
from .nets import ConvGenerator, ConvDiscriminator, ConvAutoencoder, build_networks
from .train import GanCheckpoint, train_gan, generate, load_split_images

__all__ = [
    "GanSpec",
    "GanVariant",
    "TrainConfig",
    "TrainHistory",
    "LossAux",
    "discriminator_loss",
    "generator_loss",
    "began_update_k",
    "PenaltyMode",
    "gradient_penalty",
    "ConvGenerator",
    "ConvDiscriminator",
    "ConvAutoencoder",
    "build_networks",
    "GanCheckpoint",
    "train_gan",
    "generate",
    "load_split_images",
]
