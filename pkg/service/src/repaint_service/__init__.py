"""Image-guided repainting microservice.

Exposes POST /repaint and GET /healthz. Regenerates the mask-0 region of a
canvas with a latent-space reverse-diffusion loop that re-injects noised
known-region latents at every step, conditioned on a guidance image, and
restores preserved pixels exactly by final pixel-level compositing.
"""

from .app import create_app

__version__ = "0.1.0"
__all__ = ["create_app"]
