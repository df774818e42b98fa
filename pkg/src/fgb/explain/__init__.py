from .gradcam import Heatmap, gradcam, combine_maps
from .overlay import overlay

__all__ = ["Heatmap", "gradcam", "combine_maps", "overlay"]
