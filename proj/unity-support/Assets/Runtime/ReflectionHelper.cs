// unigen-support v1.0.0 — do not edit
using System;
using System.Collections.Generic;
using System.Reflection;
using UnityEngine;

namespace UniGen
{
    /// <summary>
    /// Field binding used by generated scene builders. Every failure is a
    /// logged warning and a false return, never an exception.
    /// </summary>
    public static class ReflectionHelper
    {
        private const BindingFlags InstanceFields = BindingFlags.Instance | BindingFlags.Public | BindingFlags.NonPublic;

        private static readonly HashSet<string> warned = new HashSet<string>();

        public static bool SetFieldSafe(Component target, string fieldName, object value)
        {
            if (target == null)
            {
                Warn("<null>", fieldName, "target component is null");
                return false;
            }
            Type type = target.GetType();
            FieldInfo field = FindField(type, fieldName);
            if (field == null)
            {
                Warn(type.Name, fieldName, "no public or serialized field with this name");
                return false;
            }
            object converted;
            if (!TryConvert(value, field.FieldType, out converted))
            {
                string actual = value == null ? "null" : value.GetType().Name;
                Warn(type.Name, fieldName, "cannot assign " + actual + " to " + field.FieldType.Name);
                return false;
            }
            try
            {
                field.SetValue(target, converted);
                return true;
            }
            catch (Exception e)
            {
                Warn(type.Name, fieldName, e.Message);
                return false;
            }
        }

        /// <summary>Scene object created for a blueprint entity (named by its id).</summary>
        public static GameObject FindByEntityName(string entityId)
        {
            if (string.IsNullOrEmpty(entityId))
            {
                return null;
            }
            GameObject found = GameObject.Find(entityId);
            if (found != null)
            {
                return found;
            }
            foreach (GameObject candidate in Resources.FindObjectsOfTypeAll<GameObject>())
            {
                if (candidate.name == entityId && candidate.scene.IsValid())
                {
                    return candidate;
                }
            }
            return null;
        }

        private static FieldInfo FindField(Type type, string fieldName)
        {
            for (Type t = type; t != null && t != typeof(MonoBehaviour); t = t.BaseType)
            {
                FieldInfo field = t.GetField(fieldName, InstanceFields | BindingFlags.DeclaredOnly);
                if (field == null || field.IsInitOnly || field.IsLiteral)
                {
                    continue;
                }
                if (field.IsPublic || field.IsDefined(typeof(SerializeField), true))
                {
                    return field;
                }
            }
            return null;
        }

        private static bool TryConvert(object value, Type fieldType, out object converted)
        {
            converted = null;
            if (value == null || (value is UnityEngine.Object && (UnityEngine.Object)value == null))
            {
                return !fieldType.IsValueType;
            }
            if (fieldType.IsInstanceOfType(value))
            {
                converted = value;
                return true;
            }
            GameObject go = value as GameObject;
            if (go != null && typeof(Component).IsAssignableFrom(fieldType))
            {
                Component component = go.GetComponent(fieldType);
                converted = component;
                return component != null;
            }
            Component source = value as Component;
            if (source != null && fieldType == typeof(GameObject))
            {
                converted = source.gameObject;
                return true;
            }
            if (source != null && typeof(Component).IsAssignableFrom(fieldType))
            {
                Component component = source.GetComponent(fieldType);
                converted = component;
                return component != null;
            }
            if (fieldType.IsPrimitive && value is IConvertible && !(value is string) && !(value is bool) && fieldType != typeof(bool))
            {
                try
                {
                    converted = Convert.ChangeType(value, fieldType, System.Globalization.CultureInfo.InvariantCulture);
                    return true;
                }
                catch (Exception)
                {
                    return false;
                }
            }
            if (fieldType.IsEnum && value is string)
            {
                try
                {
                    converted = Enum.Parse(fieldType, (string)value, true);
                    return true;
                }
                catch (Exception)
                {
                    return false;
                }
            }
            return false;
        }

        private static void Warn(string typeName, string fieldName, string reason)
        {
            if (warned.Add(typeName + "." + fieldName))
            {
                Debug.LogWarning("[UniGen] " + typeName + "." + fieldName + ": " + reason);
            }
        }
    }
}
