"""Configuration for the reduced-scale style generator and the ADA controller."""

from dataclasses import dataclass, asdict, field


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass
class StyleConfig:
    z_dim: int = 64
    mapping_layers: int = 8
    base_resolution: int = 4
    max_resolution: int = 32
    channel_base: int = 1024
    channel_max: int = 128
    ada_target: float = 0.8
    batch_size: int = 12
    lr: float = 0.0025
    adam_betas: tuple[float, float] = (0.0, 0.99)
    adam_eps: float = 1e-8

    def __post_init__(self):
        self.adam_betas = tuple(self.adam_betas)
        if not _is_power_of_two(self.max_resolution) or self.max_resolution < self.base_resolution:
            raise ValueError("max_resolution must be a power of two >= base_resolution")
        if not _is_power_of_two(self.base_resolution):
            raise ValueError("base_resolution must be a power of two")
        if not 0.0 < self.ada_target < 1.0:
            raise ValueError("ada_target must lie in (0, 1)")

    @property
    def w_dim(self) -> int:
        return self.z_dim

    def block_resolutions(self) -> list[int]:
        res, out = self.base_resolution, []
        while res <= self.max_resolution:
            out.append(res)
            res *= 2
        return out

    def channels_for(self, resolution: int) -> int:
        return max(8, min(self.channel_max, self.channel_base // resolution))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["adam_betas"] = list(self.adam_betas)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StyleConfig":
        return cls(**{**d, "adam_betas": tuple(d.get("adam_betas", (0.0, 0.99)))})


def external_preset() -> StyleConfig:
    """Configuration matching the full-scale external trainer run."""
    return StyleConfig(z_dim=512, max_resolution=256, channel_base=8192, channel_max=512)


@dataclass(frozen=True)
class AdaState:
    """Feedback controller state for discriminator-augmentation probability.

    r_estimate tracks E[sign(D(x_real))] as an exponential moving average
    with the configured half-life (in discriminator steps).
    """

    p_aug: float = 0.0
    r_estimate: float = 0.0
    step_size: float = 0.0005
    half_life: int = 500

    def __post_init__(self):
        if not 0.0 <= self.p_aug <= 1.0:
            raise ValueError("p_aug must lie in [0, 1]")
        if not -1.0 <= self.r_estimate <= 1.0:
            raise ValueError("r_estimate must lie in [-1, 1]")
