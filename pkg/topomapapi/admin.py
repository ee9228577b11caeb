from django.contrib import admin

from .models import ExperimentReport, StoredMap

admin.site.register(StoredMap)
admin.site.register(ExperimentReport)
