from django.urls import include, path
from rest_framework import routers
from topomapapi.views import Maps, Reports

# pylint: disable=invalid-name
router = routers.DefaultRouter(trailing_slash=False)
router.register(r"maps", Maps, "storedmap")
router.register(r"reports", Reports, "experimentreport")

# Wire up our API using automatic URL routing.
urlpatterns = [
    path("", include(router.urls)),
]
