"""
Django settings for topomap project.

For more information on this file, see
https://docs.djangoproject.com/en/5.0/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""

import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/5.0/howto/deployment/checklist/

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'TOPOMAP_SECRET_KEY', 'p3#v9k@x!d0m2&fht7q^r1z8w$e6a5n4s_j-c=lb+oyugtih')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = True

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'rest_framework',
    'corsheaders',
    'topomapapi',
    'safedelete',
]

REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'UNAUTHENTICATED_USER': None,
}

# Library defaults. ExperimentConfig overlays a TOML file and command line
# options on top of these.
TOPOMAP = {
    'DESCRIPTOR': 'topomapapi.world.descriptor.HistogramDescriptor',
    'WORLDS_DIR': os.path.join(BASE_DIR, 'topomapapi', 'fixtures', 'worlds'),
    'CONFIGS_DIR': os.path.join(BASE_DIR, 'topomapapi', 'fixtures', 'configs'),
    'DESCRIPTOR_DIM': 32,
    'N_BEAMS': 360,
    'MAX_RANGE': 7.0,
    'NOISE_STD': 0.0,
    'SIGMA_C': 2.65,
    'GAMMA1': 1.0,
    'GAMMA2': 0.5,
    'TH_S': 3.0,
    'N_BINS': 10,
    'RHO': 1.5,
    'K': 1000.0,
    'MAX_HALF_EXTENT': 7.0,
    'TH_MATCH': 0.85,
    'N_SEEDS': 36,
    'RMS_ACCEPT': 0.2,
    'MIN_ESTIMATIONS': 3,
    'LOSS': 'huber',
    'BUDGET': 4000,
    'R_INFO': 7.0,
    'REPLAN_EVERY': 10,
    'STEP': 0.25,
    'MIN_FRONTIER_CELLS': 3,
    'RELOC_TRIALS': 8,
    'PLAN_PAIRS': 6,
    'WALK_LENGTH': 60.0,
    'OFFSET_EXTENT': 5.0,
    'SEED': 7,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'topomapapi': {
            'handlers': ['console'],
            'level': os.environ.get('TOPOMAP_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'corsheaders.middleware.CorsMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

CORS_ORIGIN_WHITELIST = (
    'http://localhost:3000',
    'http://127.0.0.1:3000'
)

ROOT_URLCONF = 'topomap.urls'

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

WSGI_APPLICATION = 'topomap.wsgi.application'


# Database
# https://docs.djangoproject.com/en/5.0/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
    }
}
DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'


# Internationalization
# https://docs.djangoproject.com/en/5.0/topics/i18n/

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True
APPEND_SLASH = False
