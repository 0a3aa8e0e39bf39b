"""
Production settings for the OCT shadow inpainting project.

Used on batch hosts that run training and sweeps unattended.
"""
from .base import *

DEBUG = False

# Console-only logging is already configured in base.py
LOGGING['root']['level'] = 'INFO'
LOGGING['loggers']['apps']['level'] = 'INFO'

# Sentry integration (optional)
if env('SENTRY_DSN', default=''):
    import sentry_sdk
    from sentry_sdk.integrations.django import DjangoIntegration
    from sentry_sdk.integrations.logging import LoggingIntegration

    sentry_sdk.init(
        dsn=env('SENTRY_DSN'),
        integrations=[DjangoIntegration(), LoggingIntegration()],
        traces_sample_rate=0.0,
        send_default_pii=False,
    )
