"""
Test settings for the OCT shadow inpainting project.
"""
from .base import *

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

OCT_INPAINT = {
    **OCT_INPAINT,
    'CONFIG_FILE': '',
    'UPSAMPLER_COMMAND': '',
    'THREADS': 2,
    'RECORD_RUNS': False,
}

LOGGING['loggers']['apps']['level'] = 'WARNING'
