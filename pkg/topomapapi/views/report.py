"""View module for handling requests about experiment reports"""
from rest_framework import serializers
from rest_framework import status
from rest_framework.response import Response
from rest_framework.viewsets import ViewSet

from topomapapi.models import ExperimentReport


class ExperimentReportSerializer(serializers.ModelSerializer):
    class Meta:
        model = ExperimentReport
        fields = ("id", "world", "seed", "modes", "created_date", "failed_trials", "payload")


class ReportSummarySerializer(serializers.ModelSerializer):
    class Meta:
        model = ExperimentReport
        fields = ("id", "world", "seed", "modes", "created_date", "failed_trials")


class Reports(ViewSet):
    """Read-only access to stored evaluation reports"""

    def list(self, request):
        """
        @api {GET} /reports GET experiment reports
        @apiName ListReports
        @apiGroup Report

        @apiParam {String} [world] Only reports for this world

        @apiSuccess (200) {Object[]} reports Report summaries without payload
        """
        reports = ExperimentReport.objects.all()
        world = self.request.query_params.get("world", None)
        if world is not None:
            reports = reports.filter(world=world)
        serializer = ReportSummarySerializer(reports, many=True)
        return Response(serializer.data)

    def retrieve(self, request, pk=None):
        """
        @api {GET} /reports/:id GET one experiment report
        @apiName GetReport
        @apiGroup Report

        @apiSuccess (200) {Object} report Summary plus the full metrics payload
        @apiError (404) {String} message No report with that id
        """
        try:
            report = ExperimentReport.objects.get(pk=pk)
            serializer = ExperimentReportSerializer(report)
            return Response(serializer.data)
        except ExperimentReport.DoesNotExist as ex:
            return Response({"message": ex.args[0]}, status=status.HTTP_404_NOT_FOUND)
