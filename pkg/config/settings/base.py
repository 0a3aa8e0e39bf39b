"""
Base settings for the OCT shadow inpainting project.
"""
import os
from pathlib import Path
import environ

# Build paths inside the project
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Initialize environment variables
env = environ.Env(
    DEBUG=(bool, False),
    OCT_INPAINT_THREADS=(int, os.cpu_count() or 1),
    OCT_INPAINT_RECORD_RUNS=(bool, True),
)

# Read .env file if it exists
env_file = BASE_DIR / '.env'
if env_file.exists():
    environ.Env.read_env(str(env_file))

SECRET_KEY = env('SECRET_KEY', default='oct-inpaint-local-only')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = []


# Application definition

DJANGO_APPS = [
    'django.contrib.contenttypes',
]

THIRD_PARTY_APPS = [
    'rest_framework',
]

LOCAL_APPS = [
    'apps.core',
    'apps.preproc',
    'apps.sparse',
    'apps.pipeline',
    'apps.evaluation',
    'apps.cli',
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS


# Database (run history only)
# https://docs.djangoproject.com/en/5.0/ref/settings/#databases

DATABASES = {
    'default': env.db('DATABASE_URL', default=f'sqlite:///{BASE_DIR / "db.sqlite3"}')
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

USE_TZ = True

TIME_ZONE = 'UTC'


# OCT Inpainting Settings

OCT_INPAINT = {
    # Config file and external upsampler (env overrides)
    'CONFIG_FILE': env('OCT_INPAINT_CONFIG', default=''),
    'UPSAMPLER_COMMAND': env('OCT_INPAINT_UPSAMPLER', default=''),

    # Parallelism
    'THREADS': env('OCT_INPAINT_THREADS'),

    # Persist dictionary / inpaint / sweep records
    'RECORD_RUNS': env('OCT_INPAINT_RECORD_RUNS'),

    # Dictionary training
    'PATCH_BUDGET_PER_IMAGE': 10000,
    'PATCH_VARIANCE_FLOOR': 1e-4,
    'KSVD_ITERATIONS': 20,
    'CODING_CHUNK_SIZE': 8192,

    # Sparse coding numerics
    'OMP_TOLERANCE': 1e-9,
    'LSTSQ_RIDGE': 1e-12,

    # Evaluation
    'SHADOWS_PER_IMAGE': 3,
    'PHANTOM_SIZE': (256, 256),
}


# Logging Configuration

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
        'apps': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}
