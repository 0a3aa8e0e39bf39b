"""
Constants and default parameters for OCT shadow inpainting.
"""

# Patch geometry (a x b) and dictionary size
DEFAULT_PATCH_W = 8
DEFAULT_PATCH_H = 8
DEFAULT_SPARSITY = 2
DEFAULT_N_ATOMS = 128

# Multi-scale branch
DEFAULT_DOWNSAMPLE_FACTOR = 4
DEFAULT_WIDTH_THRESHOLD = 8
DEFAULT_CONTEXT_MARGIN = 8
DEFAULT_MAX_EXPECTED_WIDTH = 24

# Preprocessing
DEFAULT_DARKNESS_FLOOR = 1.0 / 255.0
DEFAULT_LOESS_SPAN = 0.15
DEFAULT_ROBUST_ITERS = 2
DEFAULT_MIN_ROBUST_WEIGHT = 0.2
DEFAULT_INTENSITY_FACTOR = 0.7
DEFAULT_ROLLING_WINDOW = 51
DEFAULT_TISSUE_HALF_HEIGHT = 100
DEFAULT_DILATION = 2
DEFAULT_SHADOW_MARGIN = 2
# Lower bound on the LOESS residual scale (pixels), keeps integer jitter of
# the argmax depth from looking like an outlier on perfectly flat membranes.
DEFAULT_MIN_RESIDUAL_SCALE = 0.5

# Synthetic shadows and evaluation
SHADOW_FILL_VALUE = 0.0
DEFAULT_WIDTH_RANGE = (7, 24)
SYNTHETIC_PROTOCOL = {
    'scans': 9,
    'shadows_per_scan': 52,
    'width_range': DEFAULT_WIDTH_RANGE,
}
SSIM_WINDOW = 8
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# Exit code taxonomy shared by every command
EXIT_OK = 0
EXIT_IO = 2
EXIT_CONFIG = 3
EXIT_ALGORITHM = 4

# Image file formats
SUPPORTED_IMAGE_SUFFIXES = {
    '.pgm': 'PPM',
    '.png': 'PNG',
}
BIT_DEPTHS = (8, 16)

# Method codes understood by the sweep harness
METHOD_PROPOSED = 'proposed'
METHOD_NO_MULTISCALE = 'proposed-no-multiscale'
METHOD_BASELINE = 'baseline-interp'
SWEEP_METHODS = [METHOD_PROPOSED, METHOD_NO_MULTISCALE, METHOD_BASELINE]

REGION_MASKED = 'masked'
REGION_FULL = 'full'
