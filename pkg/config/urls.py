"""
URL configuration for the paultrap-kit project.

The admin lists scenario runs; everything else lives under paultrap.urls.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),
    path('', include('paultrap.urls')),
]
