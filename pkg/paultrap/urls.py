from django.urls import path
from . import views

urlpatterns = [
    path('api/runs/', views.RunListView.as_view(), name='run_list'),
    path('api/runs/<int:run_id>/', views.RunDetailView.as_view(), name='run_detail'),
]
