"""View module for handling requests about stored maps"""
import json
import math

from rest_framework import serializers
from rest_framework import status
from rest_framework.decorators import action
from rest_framework.response import Response
from rest_framework.viewsets import ViewSet

from topomapapi.exceptions import TopoMapError
from topomapapi.fht.builder import MODES
from topomapapi.fht.codec import deserialize
from topomapapi.models import StoredMap
from topomapapi.planning import plan as plan_route
from topomapapi.world.geometry import Transform2


class StoredMapSerializer(serializers.ModelSerializer):
    """JSON serializer for stored map metadata"""

    class Meta:
        model = StoredMap
        fields = (
            "id",
            "name",
            "world",
            "mode",
            "created_date",
            "storage_bytes",
            "main_count",
            "support_count",
            "edge_count",
        )


class StoredMapDetailSerializer(StoredMapSerializer):
    """Metadata plus the decoded map document"""

    map = serializers.SerializerMethodField()

    class Meta(StoredMapSerializer.Meta):
        fields = StoredMapSerializer.Meta.fields + ("map",)

    def get_map(self, obj):
        return json.loads(obj.payload)


class UploadSerializer(serializers.Serializer):
    name = serializers.CharField(max_length=100)
    world = serializers.CharField(max_length=100, required=False, default="")
    mode = serializers.ChoiceField(choices=MODES, required=False, default="fht")
    map = serializers.JSONField()


class PlanRequestSerializer(serializers.Serializer):
    n_s = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)
    n_d = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)
    t_map_odom = serializers.ListField(child=serializers.FloatField(), min_length=3,
                                       max_length=3, required=False)
    k = serializers.FloatField(required=False, default=1000.0)

    def validate_k(self, value):
        if value <= 1:
            raise serializers.ValidationError("must be greater than 1")
        return value


class Maps(ViewSet):
    """Request handlers for maps exchanged between robots"""

    def list(self, request):
        """
        @api {GET} /maps GET stored maps
        @apiName ListMaps
        @apiGroup Map

        @apiParam {String} [world] Only maps built in this world
        @apiParam {String} [mode] Only maps of this mode

        @apiSuccess (200) {Object[]} maps Map metadata, oldest first
        """
        stored_maps = StoredMap.objects.all()

        world = self.request.query_params.get("world", None)
        mode = self.request.query_params.get("mode", None)
        if world is not None:
            stored_maps = stored_maps.filter(world=world)
        if mode is not None:
            stored_maps = stored_maps.filter(mode=mode)

        serializer = StoredMapSerializer(stored_maps, many=True)
        return Response(serializer.data)

    def retrieve(self, request, pk=None):
        """
        @api {GET} /maps/:id GET one stored map
        @apiName GetMap
        @apiGroup Map

        @apiSuccess (200) {Object} map Metadata plus the versioned map document
        @apiError (404) {String} message No map with that id
        """
        try:
            stored_map = StoredMap.objects.get(pk=pk)
            serializer = StoredMapDetailSerializer(stored_map)
            return Response(serializer.data)
        except StoredMap.DoesNotExist as ex:
            return Response({"message": ex.args[0]}, status=status.HTTP_404_NOT_FOUND)

    def create(self, request):
        """
        @api {POST} /maps POST a map
        @apiName CreateMap
        @apiGroup Map

        @apiParam {String} name Label of the map
        @apiParam {String} [world] World the map was built in
        @apiParam {String} [mode] fht, main_only or feature_only
        @apiParam {Object} map Versioned map document
        @apiParamExample {json} Input
            {
                "name": "museum run 7",
                "world": "museum",
                "mode": "fht",
                "map": {"version": 1, "meta": {...}, "nodes": [...], "edges": [...]}
            }

        @apiSuccess (201) {Object} map Stored map metadata
        @apiError (400) {String} message Invalid request or map document
        """
        upload = UploadSerializer(data=request.data)
        if not upload.is_valid():
            return Response(upload.errors, status=status.HTTP_400_BAD_REQUEST)

        try:
            fht_map = deserialize(json.dumps(upload.validated_data["map"]))
        except TopoMapError as ex:
            return Response({"message": str(ex)}, status=status.HTTP_400_BAD_REQUEST)

        stored_map = StoredMap.from_map(
            fht_map,
            upload.validated_data["name"],
            upload.validated_data["world"],
            upload.validated_data["mode"],
        )
        stored_map.save()

        serializer = StoredMapSerializer(stored_map)
        return Response(serializer.data, status=status.HTTP_201_CREATED)

    def destroy(self, request, pk=None):
        """
        @api {DELETE} /maps/:id DELETE stored map
        @apiName DeleteMap
        @apiGroup Map

        @apiSuccess (204) {Object} empty
        @apiError (404) {String} message No map with that id
        """
        try:
            stored_map = StoredMap.objects.get(pk=pk)
            stored_map.delete()

            return Response({}, status=status.HTTP_204_NO_CONTENT)

        except StoredMap.DoesNotExist as ex:
            return Response({"message": ex.args[0]}, status=status.HTTP_404_NOT_FOUND)

    @action(methods=["post"], detail=True)
    def plan(self, request, pk=None):
        """
        @api {POST} /maps/:id/plan POST plan a route on a stored map
        @apiName PlanOnMap
        @apiGroup Map

        @apiParam {Number[]} n_s Start in the robot's odometry frame
        @apiParam {Number[]} n_d Goal in the map frame
        @apiParam {Number[]} [t_map_odom] [x, y, theta] of odom in map, identity if absent
        @apiParam {Number} [k] Access cost factor
        @apiParamExample {json} Input
            {
                "n_s": [4.0, 4.0],
                "n_d": [20.5, 12.0],
                "k": 1000
            }

        @apiSuccess (200) {Object} plan Terminal nodes, topological length and waypoints
        @apiError (400) {String} message Invalid request or no route
        @apiError (404) {String} message No map with that id
        """
        try:
            stored_map = StoredMap.objects.get(pk=pk)
        except StoredMap.DoesNotExist as ex:
            return Response({"message": ex.args[0]}, status=status.HTTP_404_NOT_FOUND)

        request_data = PlanRequestSerializer(data=request.data)
        if not request_data.is_valid():
            return Response(request_data.errors, status=status.HTTP_400_BAD_REQUEST)
        data = request_data.validated_data

        t_map_odom = Transform2.identity()
        if "t_map_odom" in data:
            t_map_odom = Transform2(*data["t_map_odom"])

        try:
            route = plan_route(stored_map.fht_map, t_map_odom, data["n_s"], data["n_d"], data["k"])
        except TopoMapError as ex:
            return Response({"message": str(ex)}, status=status.HTTP_400_BAD_REQUEST)

        if not math.isfinite(route.topo_length):
            return Response(
                {"message": f"nodes {route.start_node} and {route.end_node} are not connected"},
                status=status.HTTP_400_BAD_REQUEST,
            )
        return Response(route.as_dict())
