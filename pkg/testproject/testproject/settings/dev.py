from .base import *

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = True

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = "django-insecure-layerlat-development-only"

ALLOWED_HOSTS = ["*"]

try:
    from .local import *
except ImportError:
    pass
