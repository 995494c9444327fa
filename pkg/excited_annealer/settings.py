"""
Django settings for the excited_annealer project.
"""

from pathlib import Path

import dj_database_url
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-change-this-in-production')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'exclqa',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'excited_annealer.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'excited_annealer.wsgi.application'


# Database: the benchmark results store (bench --store)

DATABASES = {
    'default': dj_database_url.config(
        default=f'sqlite:///{BASE_DIR / "db.sqlite3"}',
        conn_max_age=600
    )
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Annealing and benchmark defaults

EXCLQA_DATA_DIR = Path(config('EXCLQA_DATA_DIR', default=str(BASE_DIR / 'runs')))

# 0 means one worker per available CPU
EXCLQA_WORKERS = config('EXCLQA_WORKERS', default=0, cast=int)

EXCLQA_ENUM_TIMEOUT = config('EXCLQA_ENUM_TIMEOUT', default=60.0, cast=float)

EXCLQA_LLL_DELTA = config('EXCLQA_LLL_DELTA', default=0.99, cast=float)
EXCLQA_LLL_ETA = config('EXCLQA_LLL_ETA', default=0.501, cast=float)

EXCLQA_SPECTRUM_MAX_N = config('EXCLQA_SPECTRUM_MAX_N', default=20, cast=int)
EXCLQA_BRUTE_FORCE_MAX_SPINS = config('EXCLQA_BRUTE_FORCE_MAX_SPINS', default=26, cast=int)

EXCLQA_LOG_LEVEL = config('EXCLQA_LOG_LEVEL', default='INFO')


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '{levelname} {asctime} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
        },
    },
    'loggers': {
        'exclqa': {
            'handlers': ['console'],
            'level': EXCLQA_LOG_LEVEL,
            'propagate': False,
        },
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}
