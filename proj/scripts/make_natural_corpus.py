"""Write 384x256 RGB crops of the sample photographs bundled with
scikit-image, matplotlib and scikit-learn into a directory.

Used by the acceptance suite for statistics that need natural images.
Output is deterministic for a given set of installed packages.
"""

import argparse
import sys
from pathlib import Path

import numpy as np
from PIL import Image

WIDTH, HEIGHT = 384, 256


def sources():
    from skimage import data

    for name in ["astronaut", "chelsea", "coffee", "rocket", "camera", "coins",
                 "hubble_deep_field", "retina", "brick", "grass", "gravel", "moon"]:
        try:
            yield name, getattr(data, name)()
        except Exception as exc:  # missing optional download
            print(f"skipping skimage {name}: {exc}", file=sys.stderr)

    try:
        import matplotlib.cbook as cbook
        with cbook.get_sample_data("grace_hopper.jpg") as f:
            yield "grace_hopper", np.asarray(Image.open(f).convert("RGB"))
    except Exception as exc:
        print(f"skipping grace_hopper: {exc}", file=sys.stderr)

    try:
        from sklearn.datasets import load_sample_images
        imgs = load_sample_images()
        for fname, img in zip(imgs.filenames, imgs.images):
            yield Path(fname).stem, img
    except Exception as exc:
        print(f"skipping sklearn samples: {exc}", file=sys.stderr)


def as_rgb(a):
    a = np.asarray(a)
    if a.dtype == bool:
        a = a.astype(np.uint8) * 255
    if a.dtype != np.uint8:
        a = np.clip(a * (255.0 if a.max() <= 1.0 else 1.0), 0, 255).astype(np.uint8)
    if a.ndim == 2:
        a = np.stack([a] * 3, axis=-1)
    return Image.fromarray(a[..., :3])


def crops(img):
    """Corner and center crops at a few scales that still cover 384x256."""
    w, h = img.size
    base = max(WIDTH / w, HEIGHT / h)
    for factor in (1.0, 1.35, 1.8):
        s = base * factor
        scaled = img.resize((max(WIDTH, round(w * s)), max(HEIGHT, round(h * s))), Image.LANCZOS)
        sw, sh = scaled.size
        offsets = {(0, 0), (sw - WIDTH, sh - HEIGHT), ((sw - WIDTH) // 2, (sh - HEIGHT) // 2)}
        for x, y in sorted(offsets):
            yield scaled.crop((x, y, x + WIDTH, y + HEIGHT))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=Path)
    ap.add_argument("--min-count", type=int, default=50)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    count = 0
    for name, array in sources():
        for i, crop in enumerate(crops(as_rgb(array))):
            crop.save(args.out / f"{name}_{i:02d}.png")
            count += 1
    print(f"wrote {count} crops to {args.out}")
    if count < args.min_count:
        print(f"need at least {args.min_count} images", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
