"""Fine-tuning loop for the three classifier architectures with weighted
sampling, classic augmentation, and probabilistic synthetic replacement."""

import numpy as np
import torch
import torch.nn as nn

from ..errors import ModelLoadError
from ..data.manifest import DatasetManifest, Split
from ..gans.train import load_split_images
from .mixing import classic_augment, mix_batch, sampler_weights
from .spec import Arch, ClassifierMetrics, ClassifierSpec, MixingConfig


def build_classifier(spec: ClassifierSpec) -> nn.Module:
    """Torchvision backbone with the final layer resized to two classes."""
    import torchvision.models as tvm

    try:
        if spec.arch is Arch.RESNET18:
            weights = tvm.ResNet18_Weights.IMAGENET1K_V1 if spec.pretrained else None
            model = tvm.resnet18(weights=weights)
            model.fc = nn.Linear(model.fc.in_features, 2)
        elif spec.arch is Arch.ALEXNET:
            weights = tvm.AlexNet_Weights.IMAGENET1K_V1 if spec.pretrained else None
            model = tvm.alexnet(weights=weights)
            model.classifier[6] = nn.Linear(model.classifier[6].in_features, 2)
        else:
            weights = tvm.SqueezeNet1_0_Weights.IMAGENET1K_V1 if spec.pretrained else None
            model = tvm.squeezenet1_0(weights=weights)
            model.classifier[1] = nn.Conv2d(512, 2, kernel_size=1)
            model.num_classes = 2
    except Exception as exc:
        raise ModelLoadError(f"cannot build {spec.arch.value}: {exc}") from exc
    return model


def _to_batch_tensor(images: list, size: int) -> torch.Tensor:
    """Stack images as (B, 3, size, size); synthetic draws may arrive at the
    generator's native resolution and are resized to match."""
    tensors = []
    for im in images:
        if not isinstance(im, torch.Tensor):
            im = torch.from_numpy(np.asarray(im, dtype=np.float32)).permute(2, 0, 1)
        if im.shape[-1] != size or im.shape[-2] != size:
            im = torch.nn.functional.interpolate(
                im[None], size=(size, size), mode="bilinear", align_corners=False
            )[0]
        tensors.append(im)
    return torch.stack(tensors)


def train_classifier(
    spec: ClassifierSpec,
    manifest: DatasetManifest,
    mix: MixingConfig,
) -> tuple[nn.Module, list[float]]:
    """Returns (model, per-epoch mean loss). Deterministic under mix.seed.

    Per batch the pipeline is: weighted sampling -> classic augmentation ->
    synthetic replacement; the TEST split is never touched.
    """
    torch.manual_seed(mix.seed)
    model = build_classifier(spec)
    if spec.epochs == 0:
        return model, []

    images, labels = load_split_images(manifest, spec.input_size, Split.TRAIN)
    weights = np.asarray(sampler_weights(manifest))
    probs = weights / weights.sum()
    rng = np.random.default_rng(mix.seed)

    optimizer = torch.optim.SGD(model.parameters(), lr=spec.lr, momentum=spec.momentum_decay)
    loss_fn = nn.CrossEntropyLoss()
    epoch_losses = []
    model.train()
    for _ in range(spec.epochs):
        draw = rng.choice(len(images), size=len(images), replace=True, p=probs)
        losses = []
        for start in range(0, len(draw), spec.batch_size):
            idx = draw[start : start + spec.batch_size]
            batch = [
                (classic_augment(images[i], rng), int(labels[i])) for i in idx
            ]
            batch = mix_batch(batch, mix, rng)
            x = _to_batch_tensor([im for im, _ in batch], spec.input_size)
            y = torch.tensor([lab for _, lab in batch], dtype=torch.long)
            optimizer.zero_grad()
            loss = loss_fn(model(x), y)
            loss.backward()
            optimizer.step()
            losses.append(float(loss.detach()))
        epoch_losses.append(float(np.mean(losses)))
    model.eval()
    return model, epoch_losses


@torch.no_grad()
def evaluate(
    model: nn.Module, manifest: DatasetManifest, input_size: int = 224,
    batch_size: int = 32,
) -> ClassifierMetrics:
    """Confusion over argmax predictions on the TEST split."""
    images, labels = load_split_images(manifest, input_size, Split.TEST)
    model.eval()
    preds = []
    for start in range(0, len(images), batch_size):
        logits = model(images[start : start + batch_size])
        preds.append(logits.argmax(dim=1))
    y_pred = torch.cat(preds).numpy()
    return ClassifierMetrics.from_predictions(labels.numpy(), y_pred)
